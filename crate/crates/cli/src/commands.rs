use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use textile_core::closedform::{closed_form_kgroups, verify_closed_form, ClosedFormError};
use textile_core::corpus::{circulant, standard_corpus};
use textile_core::graph::{essential_defect, exit_free_cycle, unreachable_pair, EssentialDefect};
use textile_core::ktheory::{group_equal, kgroups_of_system, SystemKGroups};
use textile_core::textile::exchange_specification;
use textile_core::tiling::{
    default_max_steps, diagonal_violation, find_transitivity_witness, transitivity_counterexample, Move,
    StaircaseWitness, WitnessSearch,
};
use textile_core::{EdgeId, NonnegMatrix, TextileSystem, Tile};

use crate::error::CliError;
use crate::input::{load, LoadedSystem};
use crate::report::{omega_ids, tile_value, Check, ClosedFormSection, Group, Matrices, SystemSummary, TileRef};

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub emit_matrices: bool,
    pub max_steps: Option<usize>,
    pub seed: u64,
}

/// A finished report and whether every required check held.
pub struct Outcome {
    pub report: Value,
    pub ok: bool,
}

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports are plain data")
}

fn essential_check(m: &NonnegMatrix) -> Check {
    match essential_defect(m) {
        None => {
            let min_row = (0..m.dim()).map(|i| m.row_sum(i)).min().unwrap_or(0);
            let min_col = (0..m.dim()).map(|j| m.col_sum(j)).min().unwrap_or(0);
            Check::pass(json!({ "min_row_sum": min_row, "min_col_sum": min_col }))
        }
        Some(EssentialDefect::ZeroRow(i)) => Check::fail(json!({ "zero_row": i + 1 })),
        Some(EssentialDefect::ZeroColumn(j)) => Check::fail(json!({ "zero_column": j + 1 })),
    }
}

fn condition_i_check(h: &NonnegMatrix) -> Check {
    match exit_free_cycle(h) {
        Ok(None) => {
            let min_out = (0..h.dim()).map(|i| h.row(i).iter().filter(|&&x| x > 0).count()).min().unwrap_or(0);
            Check::pass(json!({ "min_out_degree": min_out }))
        }
        Ok(Some(cycle)) => Check::fail(json!({ "exit_free_cycle": cycle.iter().map(|v| v + 1).collect::<Vec<_>>() })),
        Err(e) => Check::fail(json!({ "error": e.to_string() })),
    }
}

fn irreducible_check(m: &NonnegMatrix, label: impl Fn(usize) -> Value) -> Check {
    match unreachable_pair(m) {
        None => Check::pass(json!({ "strongly_connected_components": 1 })),
        Some((i, j)) => Check::fail(json!({ "no_path_from": label(i), "to": label(j) })),
    }
}

fn commute_check(a: &NonnegMatrix, b: &NonnegMatrix) -> Check {
    let (ab, ba) = (a.mul(b), b.mul(a));
    let n = a.dim();
    for i in 0..n {
        for j in 0..n {
            if ab[(i, j)] != ba[(i, j)] {
                return Check::fail(json!({ "row": i + 1, "col": j + 1, "ab": ab[(i, j)], "ba": ba[(i, j)] }));
            }
        }
    }
    Check::pass(json!({ "entries_compared": n * n }))
}

pub fn staircase_value(sys: &TextileSystem, w: &StaircaseWitness) -> Value {
    let moves: Vec<&str> = w
        .moves
        .iter()
        .map(|m| match m {
            Move::Right => "right",
            Move::Down => "down",
        })
        .collect();
    let tiles = std::iter::once(&w.start).chain(&w.tiles);
    let placements: Vec<Value> = w
        .positions()
        .into_iter()
        .zip(tiles)
        .map(|((i, j), t)| json!({ "position": [i, j], "tile": to_value(TileRef::new(sys, t)) }))
        .collect();
    json!({
        "moves": moves,
        "placements": placements,
        "end_position": [w.end_position.0, w.end_position.1],
        "verified": w.verify(sys),
    })
}

fn transitivity_check(sys: &TextileSystem, max_steps: usize) -> Check {
    match transitivity_counterexample(sys, max_steps) {
        Some((from, to)) => Check::fail(json!({
            "from": tile_value(sys, from),
            "to": tile_value(sys, to),
            "max_steps": max_steps,
        })),
        None => {
            let t = sys.tiles();
            let example = match find_transitivity_witness(sys, &t[0], &t[t.len() - 1], max_steps) {
                WitnessSearch::Found(w) => staircase_value(sys, &w),
                WitnessSearch::NotFound { .. } => unreachable!("search found every pair"),
            };
            Check::pass(json!({ "pairs_connected": t.len() * t.len(), "max_steps": max_steps, "example": example }))
        }
    }
}

fn diagonal_check(sys: &TextileSystem) -> Check {
    match diagonal_violation(sys.tiles()) {
        None => Check::pass(json!({ "diagonal_pairs": sys.tiles().len().pow(2) })),
        Some(v) => Check::fail(json!({
            "upper_left": tile_value(sys, v.upper_left),
            "lower_right": tile_value(sys, v.lower_right),
            "completions": v.completions,
        })),
    }
}

/// Checks in report order. The matrix conditions on `H_κ` (essential,
/// condition (I), irreducible) are reported as such; transitivity and
/// irreducibility are informational.
#[derive(Debug, Clone, Serialize)]
pub struct Checks {
    pub a_essential: Check,
    pub b_essential: Check,
    pub ab_commute: Check,
    pub kappa_valid: Check,
    pub h_kappa_essential: Check,
    pub h_kappa_condition_i: Check,
    pub kappa_matrices_commute: Check,
    pub diagonal_property: Check,
    pub k_theory_routes_agree: Check,
    pub h_kappa_irreducible: Check,
    pub transitive: Check,
}

impl Checks {
    pub fn structural_ok(&self) -> bool {
        [
            &self.a_essential,
            &self.b_essential,
            &self.ab_commute,
            &self.kappa_valid,
            &self.h_kappa_essential,
            &self.h_kappa_condition_i,
            &self.kappa_matrices_commute,
            &self.diagonal_property,
            &self.k_theory_routes_agree,
        ]
        .iter()
        .all(|c| c.holds)
    }
}

fn run_checks(sys: &TextileSystem, k: &SystemKGroups, max_steps: usize) -> Checks {
    let (a, b) = (sys.graph_a().matrix(), sys.graph_b().matrix());
    let h = sys.h_kappa();
    let ids = omega_ids(sys);
    let h_label = |i: usize| {
        let half = if i < ids.len() { "A" } else { "B" };
        json!({ "index": i + 1, "block": half, "omega": ids[i % ids.len()] })
    };
    Checks {
        a_essential: essential_check(a),
        b_essential: essential_check(b),
        ab_commute: commute_check(a, b),
        kappa_valid: Check::pass(json!({ "bijective_pairs": sys.kappa().len() })),
        h_kappa_essential: essential_check(h),
        h_kappa_condition_i: condition_i_check(h),
        kappa_matrices_commute: commute_check(sys.a_kappa(), sys.b_kappa()),
        diagonal_property: diagonal_check(sys),
        k_theory_routes_agree: routes_check(k),
        h_kappa_irreducible: irreducible_check(h, h_label),
        transitive: transitivity_check(sys, max_steps),
    }
}

fn routes_check(k: &SystemKGroups) -> Check {
    if k.consistent() {
        Check::pass(json!({ "k0": k.groups.k0.to_string(), "k1": k.groups.k1.to_string() }))
    } else {
        Check::fail(json!({
            "reduced": { "k0": k.groups.k0.to_string(), "k1": k.groups.k1.to_string() },
            "cuntz_krieger": { "k0": k.cuntz_krieger.k0.to_string(), "k1": k.cuntz_krieger.k1.to_string() },
        }))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KGroupsSection {
    pub k0: Group,
    pub k1: Group,
    /// The same groups from `I - H_κᵀ`.
    pub cuntz_krieger_k0: Group,
    pub cuntz_krieger_k1: Group,
    pub consistent: Check,
}

impl KGroupsSection {
    fn new(k: &SystemKGroups) -> Self {
        KGroupsSection {
            k0: (&k.groups.k0).into(),
            k1: (&k.groups.k1).into(),
            cuntz_krieger_k0: (&k.cuntz_krieger.k0).into(),
            cuntz_krieger_k1: (&k.cuntz_krieger.k1).into(),
            consistent: routes_check(k),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedFormComparison {
    pub formula: ClosedFormSection,
    pub agrees: Check,
}

/// `(N, M)` when the system is the exchange system on `[N]`, `[M]`.
fn exchange_sizes(sys: &TextileSystem) -> Option<(u64, u64)> {
    if sys.graph_a().vertex_count() != 1 {
        return None;
    }
    let (n, m) = (sys.graph_a().matrix()[(0, 0)], sys.graph_b().matrix()[(0, 0)]);
    let spec = exchange_specification(n, m).ok()?;
    (&spec == sys.kappa()).then_some((n, m))
}

fn closed_form_comparison(sys: &TextileSystem, k: &SystemKGroups) -> Option<ClosedFormComparison> {
    let (n, m) = exchange_sizes(sys)?;
    let r = closed_form_kgroups(n, m).ok()?;
    let agrees = if group_equal(&k.groups.k0, &r.canonical) && group_equal(&k.groups.k1, &r.k1) {
        Check::pass(json!({ "k0": r.canonical.to_string() }))
    } else {
        Check::fail(json!({ "snf": k.groups.k0.to_string(), "closed_form": r.canonical.to_string() }))
    };
    Some(ClosedFormComparison { formula: ClosedFormSection::new(n, m, &r), agrees })
}

#[derive(Debug, Clone, Serialize)]
struct SystemReport {
    command: &'static str,
    system: SystemSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<Checks>,
    kgroups: KGroupsSection,
    closed_form: Option<ClosedFormComparison>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrices: Option<Matrices>,
    #[serde(skip_serializing_if = "Option::is_none")]
    structural_ok: Option<bool>,
}

fn loaded(path: Option<&Path>) -> Result<LoadedSystem, CliError> {
    let l = load(path)?;
    if l.system.tiles().is_empty() {
        return Err(CliError::Input("the system has no tiles (AB = 0)".into()));
    }
    Ok(l)
}

fn steps(sys: &TextileSystem, opts: &Options) -> usize {
    opts.max_steps.unwrap_or_else(|| default_max_steps(sys))
}

pub fn check(path: Option<&Path>, opts: &Options) -> Result<Outcome, CliError> {
    let LoadedSystem { system: sys, kind } = loaded(path)?;
    let k = kgroups_of_system(&sys);
    let checks = run_checks(&sys, &k, steps(&sys, opts));
    let closed_form = closed_form_comparison(&sys, &k);
    let ok = checks.structural_ok() && closed_form.as_ref().is_none_or(|c| c.agrees.holds);
    let report = SystemReport {
        command: "check",
        system: SystemSummary::new(&sys, kind.name()),
        checks: Some(checks),
        kgroups: KGroupsSection::new(&k),
        closed_form,
        matrices: opts.emit_matrices.then(|| Matrices::new(&sys)),
        structural_ok: Some(ok),
    };
    Ok(Outcome { report: to_value(report), ok })
}

pub fn kgroups(path: Option<&Path>, opts: &Options) -> Result<Outcome, CliError> {
    let LoadedSystem { system: sys, kind } = loaded(path)?;
    let k = kgroups_of_system(&sys);
    let closed_form = closed_form_comparison(&sys, &k);
    let ok = k.consistent() && closed_form.as_ref().is_none_or(|c| c.agrees.holds);
    let report = SystemReport {
        command: "kgroups",
        system: SystemSummary::new(&sys, kind.name()),
        checks: None,
        kgroups: KGroupsSection::new(&k),
        closed_form,
        matrices: opts.emit_matrices.then(|| Matrices::new(&sys)),
        structural_ok: None,
    };
    Ok(Outcome { report: to_value(report), ok })
}

pub fn tiles(path: Option<&Path>, opts: &Options) -> Result<Outcome, CliError> {
    let LoadedSystem { system: sys, kind } = loaded(path)?;
    let tiles: Vec<TileRef> = (0..sys.tiles().len()).map(|i| TileRef::at(&sys, i)).collect();
    let mut report = json!({
        "command": "tiles",
        "system": to_value(SystemSummary::new(&sys, kind.name())),
        "omega": omega_ids(&sys),
        "tiles": tiles,
    });
    if opts.emit_matrices {
        report["matrices"] = to_value(Matrices::new(&sys));
    }
    Ok(Outcome { report, ok: true })
}

/// A tile given as its 1-based number in `tiles` output, or as four edge
/// identifiers `top,right,left,bottom`.
pub fn parse_tile(sys: &TextileSystem, text: &str) -> Result<Tile, CliError> {
    let text = text.trim();
    if let Ok(k) = text.parse::<usize>() {
        return k
            .checked_sub(1)
            .and_then(|i| sys.tiles().get(i).copied())
            .ok_or_else(|| CliError::Input(format!("tile number {k} out of range 1..={}", sys.tiles().len())));
    }
    let ids: Vec<&str> = text.split_inclusive(')').map(|s| s.trim_start_matches([',', ' '])).filter(|s| !s.is_empty()).collect();
    if ids.len() != 4 {
        return Err(CliError::Parse(format!("tile {text:?}: expected a tile number or four edge identifiers")));
    }
    let parse = |s: &str| s.parse::<EdgeId>().map_err(|e| CliError::Parse(format!("tile {text:?}: {e}")));
    let pos = |g: &textile_core::DirectedMultigraph, id: EdgeId| {
        g.position(&id).ok_or_else(|| CliError::Input(format!("tile {text:?}: {}-edge {id} does not exist", g.tag())))
    };
    let tile = Tile {
        top: pos(sys.graph_a(), parse(ids[0])?)?,
        right: pos(sys.graph_b(), parse(ids[1])?)?,
        left: pos(sys.graph_b(), parse(ids[2])?)?,
        bottom: pos(sys.graph_a(), parse(ids[3])?)?,
    };
    sys.tile_index(&tile).map(|_| tile).ok_or_else(|| CliError::Input(format!("{text:?} is not a tile of the system")))
}

pub fn witness(path: Option<&Path>, from: &str, to: &str, opts: &Options) -> Result<Outcome, CliError> {
    let LoadedSystem { system: sys, kind } = loaded(path)?;
    let (from, to) = (parse_tile(&sys, from)?, parse_tile(&sys, to)?);
    let max_steps = steps(&sys, opts);
    let staircase = match find_transitivity_witness(&sys, &from, &to, max_steps) {
        WitnessSearch::Found(w) => Check::pass(staircase_value(&sys, &w)),
        WitnessSearch::NotFound { max_steps } => Check::fail(json!({ "no_staircase_within": max_steps })),
    };
    let ok = staircase.holds;
    let report = json!({
        "command": "witness",
        "system": to_value(SystemSummary::new(&sys, kind.name())),
        "from": to_value(TileRef::new(&sys, &from)),
        "to": to_value(TileRef::new(&sys, &to)),
        "max_steps": max_steps,
        "staircase": to_value(staircase),
    });
    Ok(Outcome { report, ok })
}

fn closed_form_error(e: ClosedFormError) -> CliError {
    CliError::Input(e.to_string())
}

pub fn closedform(n: u64, m: u64) -> Result<Outcome, CliError> {
    let r = verify_closed_form(n, m).map_err(closed_form_error)?;
    let agrees = if r.agree() {
        Check::pass(json!({ "k0": r.closed.canonical.to_string(), "k1": r.closed.k1.to_string() }))
    } else {
        Check::fail(json!({ "snf": r.computed.groups.k0.to_string(), "closed_form": r.closed.canonical.to_string() }))
    };
    let ok = agrees.holds;
    let report = json!({
        "command": "closedform",
        "formula": to_value(ClosedFormSection::new(n, m, &r.closed)),
        "computed": to_value(KGroupsSection::new(&r.computed)),
        "agrees": to_value(agrees),
    });
    Ok(Outcome { report, ok })
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    n: u64,
    m: u64,
    closed_form: String,
    snf: String,
    agree: bool,
}

pub fn sweep(nmax: u64, mmax: u64) -> Result<Outcome, CliError> {
    if nmax < 2 || mmax < nmax {
        return Err(CliError::Input(format!("sweep needs 2 <= NMAX <= MMAX, got {nmax}, {mmax}")));
    }
    let pairs: Vec<(u64, u64)> = (2..=nmax).flat_map(|n| (n..=mmax).map(move |m| (n, m))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(n, m)| {
            let r = verify_closed_form(n, m)?;
            Ok(SweepRow {
                n,
                m,
                closed_form: r.closed.canonical.to_string(),
                snf: r.computed.groups.k0.to_string(),
                agree: r.agree(),
            })
        })
        .collect::<Result<Vec<_>, ClosedFormError>>()
        .map_err(closed_form_error)?;
    let ok = rows.iter().all(|r| r.agree);
    let disagreements: Vec<[u64; 2]> = rows.iter().filter(|r| !r.agree).map(|r| [r.n, r.m]).collect();
    let report = json!({
        "command": "sweep",
        "nmax": nmax,
        "mmax": mmax,
        "rows": rows,
        "all_agree": to_value(if ok {
            Check::pass(json!({ "pairs": pairs.len() }))
        } else {
            Check::fail(json!({ "pairs": disagreements }))
        }),
    });
    Ok(Outcome { report, ok })
}

#[derive(Debug, Clone, Serialize)]
struct CorpusRow {
    name: String,
    tiles: usize,
    omega: usize,
    structural_ok: bool,
    condition_i: bool,
    irreducible: bool,
    transitive: bool,
    k0: String,
    k1: String,
}

/// Random pairs of 0/1 circulants of size 2 to 6.
fn random_circulants(seed: u64, count: usize) -> Vec<(String, NonnegMatrix, NonnegMatrix)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let support = |n: usize, rng: &mut StdRng| loop {
        let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
        if !s.is_empty() {
            return s;
        }
    };
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=6);
            let (sa, sb) = (support(n, &mut rng), support(n, &mut rng));
            (format!("circulant{n}{sa:?}x{sb:?}"), circulant(n, &sa), circulant(n, &sb))
        })
        .collect()
}

pub fn corpus(count: usize, opts: &Options) -> Result<Outcome, CliError> {
    let mut systems: Vec<(String, TextileSystem)> = standard_corpus().into_iter().map(|c| (c.name, c.system)).collect();
    for (name, a, b) in random_circulants(opts.seed, count) {
        let sys = TextileSystem::canonical(&a, &b).map_err(crate::input::textile_error)?;
        systems.push((format!("seeded-{name}"), sys));
    }
    let rows: Vec<CorpusRow> = systems
        .par_iter()
        .map(|(name, sys)| {
            let k = kgroups_of_system(sys);
            let checks = run_checks(sys, &k, steps(sys, opts));
            CorpusRow {
                name: name.clone(),
                tiles: sys.tiles().len(),
                omega: sys.omega().len(),
                structural_ok: checks.structural_ok(),
                condition_i: checks.h_kappa_condition_i.holds,
                irreducible: checks.h_kappa_irreducible.holds,
                transitive: checks.transitive.holds,
                k0: k.groups.k0.to_string(),
                k1: k.groups.k1.to_string(),
            }
        })
        .collect();
    let failing: Vec<&str> = rows.iter().filter(|r| !r.structural_ok).map(|r| r.name.as_str()).collect();
    let ok = failing.is_empty();
    let report = json!({
        "command": "corpus",
        "seed": opts.seed,
        "random_systems": count,
        "systems": rows,
        "all_structural_ok": to_value(if ok {
            Check::pass(json!({ "systems": rows.len() }))
        } else {
            Check::fail(json!({ "failing": failing }))
        }),
    });
    Ok(Outcome { report, ok })
}

