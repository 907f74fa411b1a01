//! Input programs for the benchmarks.

pub const APP_CONCAT_DAPP: &str = include_str!("../../core/tests/fixtures/app_concat_dapp.mpl");

/// `n` list predicates where `cI` appends with its arguments rotated by `I`
/// and then calls `c(I-1)`, so the analysis order is a chain.
pub fn chain(n: usize) -> String {
    let mut out = String::new();
    for i in 0..n {
        let modes = ["in", "in", "out"];
        let rot = |xs: [&'static str; 3]| -> Vec<&'static str> {
            (0..3).map(|k| xs[(k + i) % 3]).collect()
        };
        let params = rot(["X", "Y", "Z"]);
        out.push_str(&format!(":- pred c{i}({}).\n", rot(modes).join(", ")));
        out.push_str(&format!(
            "c{i}({}) :- X => nil, Z := Y.\n",
            params.join(", ")
        ));
        let rec = rot(["Es", "Y", "Zs"]);
        let mut body = format!(
            "X => cons(E, Es), c{i}({}), Z <= cons(E, Zs)",
            rec.join(", ")
        );
        if i > 0 {
            let prev = (0..3)
                .map(|k| ["Z", "Y", "W"][(k + i - 1) % 3])
                .collect::<Vec<_>>();
            body = format!("{body}, c{}({})", i - 1, prev.join(", "));
            // `W` is a fresh output of the previous predicate; nothing reads it.
        }
        out.push_str(&format!("c{i}({}) :- {body}.\n", params.join(", ")));
    }
    out
}
