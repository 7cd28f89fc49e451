/// Result of the theory, the construction that realizes it, and the command
/// that exercises it.
pub const CONCORDANCE: &[(&str, &str, &str)] = &[
    ("Kraft-Chaitin allocation of a request sequence", "kraft-chaitin", "build"),
    ("Σ⁰₂ class to an oracle machine total exactly off it", "tot-from-sigma2", "build; trace --tag TOT"),
    ("monotone machine with infinite output exactly on the totality class", "monotone-from-tot", "build; trace --tag INF-output"),
    ("Σ⁰₂ class as the domain of an infinitary self-delimiting machine", "infsd-from-sigma2", "build; trace --tag DOM-infsd"),
    ("totality probability equal to a given right-c.e. real", "prescribed-tot", "build; trace --tag TOT"),
    ("universal machine with a given totality probability", "universal-tot", "build; trace --tag TOT"),
    ("Σ⁰₃ class as the cofiniteness class of a marker machine", "cof-markers", "build; trace --tag COF-domain"),
    ("cofiniteness probability equal to a given left-c.e. real", "prescribed-cof", "build; trace --tag COF-domain"),
    ("computable-domain probability equal to a given left-c.e. real", "prescribed-com", "build; trace --tag COM-domain"),
    ("domain measure of an infinitary self-delimiting machine", "prescribed-infsd", "build; trace --tag DOM-infsd"),
    ("outcome probabilities are approximable from one side", "-", "trace"),
    ("Martin-Löf test from a c.e. prefix-free set and an oracle sub-enumeration", "-", "mltest"),
    ("machine-model invariants", "-", "verify-machine"),
];

pub fn render() -> String {
    let widths = CONCORDANCE.iter().fold((6, 12), |(a, b), (r, c, _)| {
        (a.max(r.chars().count()), b.max(c.chars().count()))
    });
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
    let mut out = format!(
        "{}  {}  command\n",
        pad("result", widths.0),
        pad("construction", widths.1)
    );
    for (result, construction, command) in CONCORDANCE {
        out.push_str(&format!(
            "{}  {}  {command}\n",
            pad(result, widths.0),
            pad(construction, widths.1)
        ));
    }
    out
}
