//! Exhaustive and sampled cross-checks of the palette characterisation.
//!
//! Every instance is checked against several independent routes:
//!
//! * (a) perfect matching of `G_f^c` vs "no violating palette system", with
//!   a brute-force factor search as a third opinion;
//! * (b) "some palette is violating" vs "some palette fails the split-and-twin
//!   inequality", once per [`FreeVertexRule`], together with the per-palette
//!   identity `odd(G_f^c - X) = h + Σ_S (d^c - f)`;
//! * (c) on properly coloured inputs, the uncoloured gadget condition vs the
//!   palette condition vs a brute-force f-factor search.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alternative::{gs_odd_count, isolated_s_remainder, palette_lhs, FreeVertexRule};
use crate::certificate::{extract_palette_from, is_violating, normalize_violating, satisfies_normal_form};
use crate::factor::{brute_f_factor, brute_pc_factor};
use crate::format::serialize_ecg;
use crate::gadget::{build_gf, build_gfc, GadgetGraph};
use crate::graph::{Colour, ColouredGraph, DegreeSpec, Graph, RawGraph};
use crate::matching::perfect_matching;
use crate::palette::{vertex_roles, x_of_palette, PaletteSystem, Role};
use crate::tutte::{deficiency_violation, gadget_violation, DeficiencyVariant};

/// Sweep parameters.
#[derive(Clone, Debug, Serialize)]
pub struct HarnessConfig {
    /// Exhaustive part: every graph on `1..=n` vertices with edge colours in
    /// `1..=k` and every `f` with values in `0..=fmax`.
    pub n: usize,
    pub k: Colour,
    pub fmax: usize,
    /// Random part: this many feasible instances on `sample_n` vertices.
    pub sample: usize,
    pub sample_n: usize,
    pub sample_k: Colour,
    pub seed: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self { n: 3, k: 2, fmax: 2, sample: 0, sample_n: 5, sample_k: 3, seed: 0x5eed }
    }
}

/// Every coloured graph on `n` vertices named `v0..` with colours in
/// `1..=k`, paired with every `f` with values in `0..=fmax`.
pub fn exhaustive_instances(n: usize, k: Colour, fmax: usize) -> Vec<(ColouredGraph, DegreeSpec)> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let graphs = (k as usize + 1).pow(pairs.len() as u32);
    let fs = (fmax + 1).pow(n as u32);
    let mut out = Vec::with_capacity(graphs * fs);
    for code in 0..graphs {
        let mut rest = code;
        let mut raw = RawGraph::new(k);
        for i in 0..n {
            raw = raw.vertex(&format!("v{i}"));
        }
        for &(i, j) in &pairs {
            let c = (rest % (k as usize + 1)) as Colour;
            rest /= k as usize + 1;
            if c > 0 {
                raw = raw.edge(&format!("v{i}"), &format!("v{j}"), c);
            }
        }
        let g = raw.build().expect("generated graphs are simple");
        for fcode in 0..fs {
            let mut rest = fcode;
            let f = (0..n)
                .map(|_| {
                    let x = rest % (fmax + 1);
                    rest /= fmax + 1;
                    x
                })
                .collect();
            out.push((g.clone(), DegreeSpec::new(f)));
        }
    }
    out
}

/// `count` random instances on `n` vertices; each pair is absent or gets a
/// uniform colour, and `f(v)` is uniform in `0..=min(fmax, d^c(v))`.
pub fn random_instances(n: usize, k: Colour, fmax: usize, count: usize, seed: u64) -> Vec<(ColouredGraph, DegreeSpec)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut raw = RawGraph::new(k);
            for i in 0..n {
                raw = raw.vertex(&format!("v{i}"));
            }
            for i in 0..n {
                for j in i + 1..n {
                    let c: Colour = rng.gen_range(0..=k);
                    if c > 0 {
                        raw = raw.edge(&format!("v{i}"), &format!("v{j}"), c);
                    }
                }
            }
            let g = raw.build().expect("generated graphs are simple");
            let f = (0..n).map(|v| rng.gen_range(0..=fmax.min(g.colour_degree(v)))).collect();
            (g, DegreeSpec::new(f))
        })
        .collect()
}

/// Every per-vertex-bounded palette system, in odometer order (vertex 0
/// varies fastest).
pub fn all_palettes(g: &ColouredGraph, f: &DegreeSpec) -> Vec<PaletteSystem> {
    let roles: Vec<Vec<Role>> = g.graph().vertices().map(|v| vertex_roles(g, f, v)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; roles.len()];
    loop {
        out.push(PaletteSystem::from_roles(idx.iter().enumerate().map(|(v, &i)| (v, roles[v][i].clone()))));
        let mut v = 0;
        loop {
            if v == roles.len() {
                return out;
            }
            idx[v] += 1;
            if idx[v] < roles[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

/// One palette evaluated under every route.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PaletteComparison {
    pub x_size: usize,
    pub odd: usize,
    pub lhs: usize,
    /// `Σ_{u∈S} (d^c(u) - f(u))`.
    pub s_remainder: usize,
    pub h: BTreeMap<FreeVertexRule, usize>,
}

impl PaletteComparison {
    pub fn violating(&self) -> bool {
        self.odd > self.x_size
    }

    pub fn inequality_fails(&self, rule: FreeVertexRule) -> bool {
        self.h[&rule] > self.lhs
    }

    pub fn bridging_holds(&self, rule: FreeVertexRule) -> bool {
        self.odd == self.h[&rule] + self.s_remainder
    }
}

pub fn compare_palette(g: &ColouredGraph, f: &DegreeSpec, gg: &GadgetGraph, p: &PaletteSystem) -> PaletteComparison {
    let x = x_of_palette(gg, g, p).expect("palette fits the gadget");
    PaletteComparison {
        x_size: x.len(),
        odd: gg.graph().odd_components(&x),
        lhs: palette_lhs(g, f, p),
        s_remainder: isolated_s_remainder(g, f, p),
        h: FreeVertexRule::ALL.iter().map(|&r| (r, gs_odd_count(g, f, p, r))).collect(),
    }
}

/// Outcome of all checks on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    pub feasible: bool,
    pub has_factor: bool,
    pub palettes: usize,
    pub violating_palettes: usize,
    /// Matching route, palette route and brute force disagree.
    pub a_divergence: bool,
    /// Per rule: "some palette violating" differs from "some palette fails
    /// the inequality".
    pub b_divergence: BTreeMap<FreeVertexRule, bool>,
    /// Per rule: number of palettes where the bridging identity fails.
    pub bridging_failures: BTreeMap<FreeVertexRule, usize>,
    /// Per rule: number of palettes failing the inequality.
    pub failing_palettes: BTreeMap<FreeVertexRule, usize>,
    /// Per rule: the first palette where violation and inequality disagree.
    pub first_mismatch: BTreeMap<FreeVertexRule, (PaletteSystem, PaletteComparison)>,
    pub properly_coloured: bool,
    pub c_divergence: bool,
}

pub fn check_instance(g: &ColouredGraph, f: &DegreeSpec) -> InstanceReport {
    let rules = FreeVertexRule::ALL;
    let mut report = InstanceReport {
        feasible: false,
        has_factor: false,
        palettes: 0,
        violating_palettes: 0,
        a_divergence: false,
        b_divergence: rules.iter().map(|&r| (r, false)).collect(),
        bridging_failures: rules.iter().map(|&r| (r, 0)).collect(),
        failing_palettes: rules.iter().map(|&r| (r, 0)).collect(),
        first_mismatch: BTreeMap::new(),
        properly_coloured: g.is_properly_coloured(),
        c_divergence: false,
    };
    let Ok(gg) = build_gfc(g, f) else {
        report.a_divergence = brute_pc_factor(g, f).is_some();
        return report;
    };
    report.feasible = true;
    report.has_factor = perfect_matching(gg.graph()).is_some();
    let brute = brute_pc_factor(g, f).is_some();

    for p in all_palettes(g, f) {
        let cmp = compare_palette(g, f, &gg, &p);
        report.palettes += 1;
        report.violating_palettes += cmp.violating() as usize;
        for rule in rules {
            let fails = cmp.inequality_fails(rule);
            *report.failing_palettes.get_mut(&rule).unwrap() += fails as usize;
            *report.bridging_failures.get_mut(&rule).unwrap() += !cmp.bridging_holds(rule) as usize;
            if fails != cmp.violating() && !report.first_mismatch.contains_key(&rule) {
                report.first_mismatch.insert(rule, (p.clone(), cmp.clone()));
            }
        }
    }
    let violating = report.violating_palettes > 0;
    report.a_divergence = report.has_factor == violating || report.has_factor != brute;
    for rule in rules {
        let fails = report.failing_palettes[&rule] > 0;
        report.b_divergence.insert(rule, fails != violating);
    }
    if report.properly_coloured {
        let c1 = match build_gf(g.graph(), f) {
            Ok(plain) => gadget_violation(&plain).is_none(),
            Err(_) => false,
        };
        let c2 = !violating;
        let exists = brute_f_factor(g.graph(), f).is_some();
        report.c_divergence = !(c1 == c2 && c2 == exists);
    }
    report
}

/// A divergent instance, recorded as ECG text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub instance: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteTally {
    pub checked: usize,
    pub divergences: usize,
    /// The first few divergent instances.
    pub examples: Vec<Divergence>,
}

const MAX_EXAMPLES: usize = 5;

impl SuiteTally {
    fn record(&mut self, diverged: bool, g: &ColouredGraph, f: &DegreeSpec, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if diverged {
            self.divergences += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(Divergence { instance: serialize_ecg(g, f), detail: detail() });
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RuleTally {
    /// Instance-level: violating palette exists vs failing palette exists.
    pub instances: SuiteTally,
    /// Palette-level count of `violating != fails`.
    pub palette_mismatches: usize,
    /// Palette-level count of bridging identity failures.
    pub bridging_failures: usize,
    /// Instances with at least one bridging failure.
    pub bridging_instances: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HarnessReport {
    pub instances: usize,
    pub infeasible: usize,
    pub positive: usize,
    pub negative: usize,
    pub palettes: usize,
    pub suite_a: SuiteTally,
    pub suite_b: BTreeMap<FreeVertexRule, RuleTally>,
    pub suite_c: SuiteTally,
}

impl HarnessReport {
    /// Divergences that contradict a theorem form: suites (a) and (c), and
    /// suite (b) under the parity-corrected rule. Literal-rule divergences are
    /// informational.
    pub fn hard_divergences(&self) -> usize {
        self.suite_a.divergences
            + self.suite_c.divergences
            + self.suite_b.get(&FreeVertexRule::ParityCorrected).map_or(0, |t| t.instances.divergences)
    }

    fn absorb(&mut self, g: &ColouredGraph, f: &DegreeSpec, r: &InstanceReport) {
        self.instances += 1;
        if !r.feasible {
            self.infeasible += 1;
            self.suite_a.record(r.a_divergence, g, f, || "infeasible degree but a factor exists".into());
            return;
        }
        if r.has_factor {
            self.positive += 1;
        } else {
            self.negative += 1;
        }
        self.palettes += r.palettes;
        self.suite_a.record(r.a_divergence, g, f, || {
            format!("perfect matching: {}, violating palettes: {}", r.has_factor, r.violating_palettes)
        });
        for rule in FreeVertexRule::ALL {
            let t = self.suite_b.entry(rule).or_default();
            t.instances.record(r.b_divergence[&rule], g, f, || {
                format!(
                    "violating palettes: {}, failing palettes: {}, first mismatch: {}",
                    r.violating_palettes,
                    r.failing_palettes[&rule],
                    mismatch_text(g, r.first_mismatch.get(&rule), rule)
                )
            });
            t.palette_mismatches += r.first_mismatch.contains_key(&rule) as usize;
            t.bridging_failures += r.bridging_failures[&rule];
            t.bridging_instances += (r.bridging_failures[&rule] > 0) as usize;
        }
        if r.properly_coloured {
            self.suite_c.record(r.c_divergence, g, f, || "gadget condition, palette condition and brute force disagree".into());
        }
    }
}

/// Human-readable description of a palette comparison.
pub fn mismatch_text(g: &ColouredGraph, m: Option<&(PaletteSystem, PaletteComparison)>, rule: FreeVertexRule) -> String {
    match m {
        None => "none".into(),
        Some((p, c)) => format!(
            "palette {} |X|={} odd={} lhs={} h={}",
            p.to_json(g.graph()),
            c.x_size,
            c.odd,
            c.lhs,
            c.h[&rule]
        ),
    }
}

/// Run every check over the configured instance space. Instances are
/// checked in parallel; the report does not depend on scheduling.
pub fn equivalence_harness(config: &HarnessConfig) -> HarnessReport {
    let mut instances = Vec::new();
    for n in 1..=config.n {
        instances.extend(exhaustive_instances(n, config.k, config.fmax));
    }
    if config.sample > 0 {
        instances.extend(random_instances(config.sample_n, config.sample_k, config.fmax, config.sample, config.seed));
    }
    run_instances(&instances)
}

pub fn run_instances(instances: &[(ColouredGraph, DegreeSpec)]) -> HarnessReport {
    let results: Vec<InstanceReport> = instances.par_iter().map(|(g, f)| check_instance(g, f)).collect();
    let mut report = HarnessReport::default();
    for rule in FreeVertexRule::ALL {
        report.suite_b.insert(rule, RuleTally::default());
    }
    for ((g, f), r) in instances.iter().zip(&results) {
        report.absorb(g, f, r);
    }
    report
}

/// Result of normalising every violating subset of one gadget.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NormalizationTally {
    pub gadgets: usize,
    pub violating_sets: usize,
    pub failures: usize,
}

/// Normalise every violating subset of `gg` and check the output: still
/// violating, in normal form, and equal to the `X` of its extracted palette.
pub fn normalization_check(g: &ColouredGraph, gg: &GadgetGraph) -> NormalizationTally {
    let graph = gg.graph();
    let n = graph.vertex_count();
    assert!(n < usize::BITS as usize, "gadget too large for subset sweep");
    let mut tally = NormalizationTally { gadgets: 1, ..Default::default() };
    let mut x = Vec::with_capacity(n);
    for bits in 0u64..(1u64 << n) {
        x.clear();
        x.extend((0..n).filter(|&v| bits >> v & 1 == 1));
        if !is_violating(graph, &x) {
            continue;
        }
        tally.violating_sets += 1;
        let ok = match normalize_violating(gg, &x) {
            Ok((y, p)) => {
                is_violating(graph, &y)
                    && satisfies_normal_form(gg, &y)
                    && extract_palette_from(gg, &y) == p
                    && x_of_palette(gg, g, &p).map_or(false, |z| z == y)
            }
            Err(_) => false,
        };
        tally.failures += !ok as usize;
    }
    tally
}

/// [`normalization_check`] over the negative feasible instances whose gadget
/// has at most `max_vertices` vertices.
pub fn normalization_sweep(instances: &[(ColouredGraph, DegreeSpec)], max_vertices: usize) -> NormalizationTally {
    instances
        .par_iter()
        .filter_map(|(g, f)| {
            let gg = build_gfc(g, f).ok()?;
            if gg.graph().vertex_count() > max_vertices || perfect_matching(gg.graph()).is_some() {
                return None;
            }
            Some(normalization_check(g, &gg))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(NormalizationTally::default(), |a, b| NormalizationTally {
            gadgets: a.gadgets + b.gadgets,
            violating_sets: a.violating_sets + b.violating_sets,
            failures: a.failures + b.failures,
        })
}

/// Deficiency-form sweep over every graph on `1..=n` vertices and every `f`
/// with values in `0..=fmax`: the inequality holds for all `(S, T)` iff a
/// brute-force f-factor exists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DeficiencyTally {
    pub checked: usize,
    pub divergences: usize,
    /// Instances where the printed reading disagrees with brute force.
    pub as_printed_divergences: usize,
}

pub fn deficiency_sweep(n_max: usize, fmax: usize) -> DeficiencyTally {
    let mut instances = Vec::new();
    for n in 1..=n_max {
        for (g, f) in exhaustive_instances(n, 1, fmax) {
            instances.push((g.graph().clone(), f));
        }
    }
    let results: Vec<(bool, bool)> = instances
        .par_iter()
        .map(|(graph, f): &(Graph, DegreeSpec)| {
            let exists = brute_f_factor(graph, f).is_some();
            let classical = deficiency_violation(graph, f, DeficiencyVariant::Classical).is_none();
            let printed = deficiency_violation(graph, f, DeficiencyVariant::AsPrinted).is_none();
            (classical != exists, printed != exists)
        })
        .collect();
    DeficiencyTally {
        checked: results.len(),
        divergences: results.iter().filter(|r| r.0).count(),
        as_printed_divergences: results.iter().filter(|r| r.1).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_counts() {
        assert_eq!(exhaustive_instances(2, 2, 1).len(), 3 * 4);
        assert_eq!(exhaustive_instances(3, 1, 2).len(), 8 * 27);
        let r = random_instances(5, 3, 2, 20, 7);
        assert_eq!(r, random_instances(5, 3, 2, 20, 7));
        assert!(r.iter().all(|(g, f)| g.graph().vertices().all(|v| f.get(v) <= g.colour_degree(v))));
    }

    #[test]
    fn small_sweep_has_no_hard_divergence() {
        let report = equivalence_harness(&HarnessConfig { n: 3, k: 2, fmax: 2, ..Default::default() });
        assert_eq!(report.suite_a.divergences, 0, "{:?}", report.suite_a.examples);
        assert_eq!(report.suite_c.divergences, 0, "{:?}", report.suite_c.examples);
        assert!(report.positive > 0 && report.negative > 0);
    }

    #[test]
    fn star_is_a_literal_mismatch() {
        let g = RawGraph::new(2)
            .vertex("z")
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .edge("z", "a", 1)
            .edge("z", "b", 1)
            .edge("z", "c", 2)
            .build()
            .unwrap();
        let f = DegreeSpec::new(vec![1, 1, 1, 2]);
        let gg = build_gfc(&g, &f).unwrap();
        let cmp = compare_palette(&g, &f, &gg, &PaletteSystem::default());
        assert_eq!((cmp.odd, cmp.x_size, cmp.lhs), (1, 0, 0));
        assert_eq!(cmp.h[&FreeVertexRule::Literal], 0);
        assert_eq!(cmp.h[&FreeVertexRule::ParityCorrected], 1);
        let r = check_instance(&g, &f);
        let (p, m) = &r.first_mismatch[&FreeVertexRule::Literal];
        assert!(p.is_empty());
        assert_eq!(m.h[&FreeVertexRule::Literal], 0);
    }

    #[test]
    fn normalization_on_star() {
        let g = RawGraph::new(2)
            .vertex("z")
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .edge("z", "a", 1)
            .edge("z", "b", 1)
            .edge("z", "c", 2)
            .build()
            .unwrap();
        let f = DegreeSpec::new(vec![1, 1, 1, 2]);
        let gg = build_gfc(&g, &f).unwrap();
        let t = normalization_check(&g, &gg);
        assert!(t.violating_sets > 0);
        assert_eq!(t.failures, 0);
    }
}
