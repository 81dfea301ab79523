//! Static registry of every check the suites can emit: name pattern,
//! relation tag, assert/log-only kind, and threshold. `--list-checks`
//! renders this table; the suites construct their records from it so the
//! two cannot drift apart.

use velgauge::report::{CheckKind, CheckRecord};

#[derive(Debug, Clone, Copy)]
pub struct CheckInfo {
    /// Record name; `{alg}` is substituted with the algebra name.
    pub name: &'static str,
    /// Relation tag carried by every record.
    pub tag: &'static str,
    pub kind: CheckKind,
    /// Threshold for assert checks (`value <= threshold` passes); windows
    /// are encoded as distance-to-window against 0.
    pub threshold: Option<f64>,
    pub suite: &'static str,
    pub description: &'static str,
}

pub const CHECKS: &[CheckInfo] = &[
    // -------- algebra --------
    CheckInfo {
        name: "{alg}-commutation",
        tag: "commutation-closure",
        kind: CheckKind::Assert,
        threshold: Some(1e-12),
        suite: "algebra",
        description: "max |[T_a,T_b] - iC T| over all generator pairs",
    },
    CheckInfo {
        name: "{alg}-jacobi",
        tag: "jacobi-identity",
        kind: CheckKind::Assert,
        threshold: Some(1e-12),
        suite: "algebra",
        description: "max cyclic Jacobi sum over all index tuples",
    },
    CheckInfo {
        name: "{alg}-total-antisymmetry",
        tag: "total-antisymmetry",
        kind: CheckKind::Assert,
        threshold: Some(1e-12),
        suite: "algebra",
        description: "max violation of C antisymmetry under any transposition",
    },
    CheckInfo {
        name: "{alg}-extraction-idempotent",
        tag: "structure-constants",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "algebra",
        description: "re-extracted structure constants match bitwise",
    },
    // -------- lattice --------
    CheckInfo {
        name: "lambda-convergence-ratio",
        tag: "lambda-convergence",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "lattice",
        description: "numeric-vs-analytic lambda error ratio in [3.6, 4.4] across 8^4/16^4",
    },
    CheckInfo {
        name: "lambda-affine-exact",
        tag: "lambda-convergence",
        kind: CheckKind::Assert,
        threshold: Some(1e-13),
        suite: "lattice",
        description: "numeric lambda exact for affine velocity fields",
    },
    CheckInfo {
        name: "stencil-order-ratio",
        tag: "stencil-order",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "lattice",
        description: "central-difference error ratio in [3.6, 4.4] for one harmonic",
    },
    // -------- fields --------
    CheckInfo {
        name: "global-invariance-slope-{alg}",
        tag: "global-invariance",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "fields",
        description: "log-log slope of |dS|/|S| vs eps in [1.9, 2.1] for constant parameters",
    },
    CheckInfo {
        name: "local-invariance-h-ratio",
        tag: "local-invariance",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "fields",
        description: "eps-linear action variation shrinks ~4x when h halves (window [3, 5])",
    },
    CheckInfo {
        name: "derivative-oracle-matter",
        tag: "derivative-oracle",
        kind: CheckKind::Assert,
        threshold: Some(1e-6),
        suite: "fields",
        description: "analytic dL/d(grad phi) vs site perturbation at 50 seeded sites",
    },
    CheckInfo {
        name: "derivative-oracle-gauge",
        tag: "derivative-oracle",
        kind: CheckKind::Assert,
        threshold: Some(1e-6),
        suite: "fields",
        description: "analytic dL/d(grad D) vs site perturbation at 50 seeded sites",
    },
    CheckInfo {
        name: "pullback-chain-ratio",
        tag: "pullback-consistency",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "fields",
        description: "lattice gradient of sampled D vs chain-rule assembly, ratio in [3.6, 4.4]",
    },
    CheckInfo {
        name: "transform-reversal-slope",
        tag: "Eq.(1)-(2)",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "fields",
        description: "forward+backward transformation returns to O(eps^2): slope in [1.9, 2.1]",
    },
    // -------- noether --------
    CheckInfo {
        name: "f2-antisymmetry",
        tag: "Eq.(17)-antisymmetry",
        kind: CheckKind::Assert,
        threshold: Some(1e-13),
        suite: "noether",
        description: "componentwise antisymmetry of the covariant strength tensor",
    },
    CheckInfo {
        name: "j2-conservation-{alg}",
        tag: "Eq.(20)-conservation",
        kind: CheckKind::Assert,
        threshold: Some(1e-10),
        suite: "noether",
        description: "worst relative divergence of J2 over 20 seeded configurations",
    },
    CheckInfo {
        name: "mixing-affine",
        tag: "Eq.(11)-mixing",
        kind: CheckKind::Assert,
        threshold: Some(1e-12),
        suite: "noether",
        description: "worst pointwise relative residual of j2 - J1 lambda over 10 affine draws",
    },
    CheckInfo {
        name: "covariance-slope-su2",
        tag: "Eq.(17)-covariance",
        kind: CheckKind::Assert,
        threshold: Some(0.0),
        suite: "noether",
        description: "Richardson-corrected isovector defect slope in eps, window [1.85, 2.15]",
    },
    CheckInfo {
        name: "current-reality-{alg}",
        tag: "current-reality",
        kind: CheckKind::Assert,
        threshold: Some(1e-10),
        suite: "noether",
        description: "imaginary residue of the physical currents relative to their norm",
    },
    CheckInfo {
        name: "lambda-regime",
        tag: "lambda-nonzero",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "min |lambda component| (componentwise nonzero reading); det range in note",
    },
    CheckInfo {
        name: "eq5-residual",
        tag: "Eq.(5)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative residual of the first local-invariance condition (on-shell)",
    },
    CheckInfo {
        name: "eq6a-residual",
        tag: "Eq.(6a)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative residual of the second condition, divergence form",
    },
    CheckInfo {
        name: "eq6b-residual",
        tag: "Eq.(6b)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative residual of the second condition, expanded form",
    },
    CheckInfo {
        name: "eq7a-residual",
        tag: "Eq.(7a)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "norm of F (the printed third condition would force it to vanish)",
    },
    CheckInfo {
        name: "eq7b-residual",
        tag: "Eq.(7b)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative symmetric part of F (the self-consistent third condition)",
    },
    CheckInfo {
        name: "eq12-j1-divergence",
        tag: "Eq.(12)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative divergence of J1 (on-shell conservation)",
    },
    CheckInfo {
        name: "eq15-defining-requirement",
        tag: "Eq.(15)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "covariant divergence of F2 vs divergence of F, side by side",
    },
    CheckInfo {
        name: "eq19-vs-eq20",
        tag: "Eq.(19)-vs-(20)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative difference of the two J2 constructions",
    },
    CheckInfo {
        name: "eq24-vs-eq20",
        tag: "Eq.(24)-vs-(20)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative difference of the reduced J2 form and the canonical one",
    },
    CheckInfo {
        name: "eq9-vs-eq23",
        tag: "Eq.(9)-vs-(23)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "relative difference of the two J1 forms",
    },
    CheckInfo {
        name: "eq25-residual",
        tag: "Eq.(25)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "gauge-sector field equation residual of the configured fields",
    },
    CheckInfo {
        name: "eq26-residual",
        tag: "Eq.(26)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "velocity-sector field equation residual of the configured fields",
    },
    CheckInfo {
        name: "eq25-free-wave",
        tag: "Eq.(25)",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "noether",
        description: "Eq.(25) residual driven by the u1 lattice-dispersion plane wave",
    },
    // -------- reduction --------
    CheckInfo {
        name: "reduction-j1-{alg}",
        tag: "reduction",
        kind: CheckKind::Assert,
        threshold: Some(1e-12),
        suite: "reduction",
        description: "J1 vs the independent space-time-gauge reference at identity lambda",
    },
    CheckInfo {
        name: "reduction-j2-{alg}",
        tag: "reduction",
        kind: CheckKind::Assert,
        threshold: Some(1e-12),
        suite: "reduction",
        description: "J2 vs the independent space-time-gauge reference at identity lambda",
    },
    CheckInfo {
        name: "reduction-regime-flag",
        tag: "reduction",
        kind: CheckKind::LogOnly,
        threshold: None,
        suite: "reduction",
        description: "lambda deviation from identity (nonzero flags a non-reduction regime)",
    },
];

/// Find the registry row for a record name (with `{alg}` already expanded).
pub fn info_for(expanded_name: &str) -> Option<&'static CheckInfo> {
    CHECKS.iter().find(|info| {
        if let Some(prefix) = info.name.strip_suffix("{alg}") {
            expanded_name.starts_with(prefix)
        } else if info.name.contains("{alg}") {
            let parts: Vec<&str> = info.name.split("{alg}").collect();
            expanded_name.starts_with(parts[0]) && expanded_name.ends_with(parts[1])
        } else {
            info.name == expanded_name
        }
    })
}

/// Build an assert record from the registry entry.
pub fn assert_record(name_pattern: &'static str, alg: &str, value: f64) -> CheckRecord {
    let info = CHECKS
        .iter()
        .find(|i| i.name == name_pattern)
        .expect("registered check");
    let name = info.name.replace("{alg}", alg);
    CheckRecord::assert_leq(&name, info.tag, value, info.threshold.unwrap())
}

/// Build a window-assert record (distance-to-window vs 0).
pub fn window_record(
    name_pattern: &'static str,
    alg: &str,
    value: f64,
    lo: f64,
    hi: f64,
) -> CheckRecord {
    let info = CHECKS
        .iter()
        .find(|i| i.name == name_pattern)
        .expect("registered check");
    let name = info.name.replace("{alg}", alg);
    CheckRecord::assert_in_range(&name, info.tag, value, lo, hi)
}

/// Build a log-only record from the registry entry.
pub fn log_record(name_pattern: &'static str, value: f64) -> CheckRecord {
    let info = CHECKS
        .iter()
        .find(|i| i.name == name_pattern)
        .expect("registered check");
    CheckRecord::log(info.name, info.tag, value)
}

/// Human-readable registry table for `--list-checks`.
pub fn render_table() -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:34} {:24} {:9} {:12} {}\n",
        "check", "equation-tag", "kind", "threshold", "suite"
    ));
    for info in CHECKS {
        let kind = match info.kind {
            CheckKind::Assert => "assert",
            CheckKind::LogOnly => "log-only",
        };
        let threshold = match info.threshold {
            Some(0.0) => "window".to_string(),
            Some(t) => format!("{t:e}"),
            None => "-".to_string(),
        };
        out.push_str(&format!(
            "{:34} {:24} {:9} {:12} {}\n",
            info.name, info.tag, kind, threshold, info.suite
        ));
    }
    out
}
