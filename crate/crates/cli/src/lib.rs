//! Experiment harness for the `uflp-vqa-core` solvers: instance files,
//! single runs and comparison sweeps, and CSV/JSON reports.

pub mod experiment;
pub mod instance_file;
pub mod report;

use serde_json::{json, Value};
use uflp_vqa_core::QuboForm;

/// `{"constant": c, "linear": [[i, c], ...], "quadratic": [[i, j, c], ...]}` in key order.
pub fn qubo_to_json(q: &QuboForm) -> Value {
    json!({
        "constant": q.constant,
        "linear": q.linear().iter().map(|(&i, &c)| json!([i, c])).collect::<Vec<_>>(),
        "quadratic": q.quadratic().iter().map(|(&(i, j), &c)| json!([i, j, c])).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubo_dump_lists_terms_in_order() {
        let mut q = QuboForm::new();
        q.add_constant(1.5);
        q.add_linear(3, 2.0);
        q.add_linear(1, -1.0);
        q.add_quadratic(2, 0, 4.0);
        let v = qubo_to_json(&q);
        assert_eq!(v["constant"], 1.5);
        assert_eq!(v["linear"], json!([[1, -1.0], [3, 2.0]]));
        assert_eq!(v["quadratic"], json!([[0, 2, 4.0]]));
    }
}
