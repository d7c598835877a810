//! Structure summary of one algebra.

use cartan_core::structure::{
    is_simple, nilradical, simple_constituents, solvable_radical, SimplicityVerdict,
};
use cartan_core::{fingerprint, LieAlgebra, SearchConfig};

use crate::claims::Status;
use crate::report::{Format, Grid};
use crate::CliError;

fn internal(e: cartan_core::Error) -> CliError {
    CliError::Internal(e.to_string())
}

/// Quantity/value rows; the status is `Unknown` when simplicity could
/// not be decided.
pub fn analyze(name: &str, l: &LieAlgebra, cfg: &SearchConfig) -> Result<(Grid, Status), CliError> {
    let f = fingerprint(l);
    let mut g = Grid::new(&["quantity", "value"]);
    let mut put = |k: &str, v: String| g.push(vec![k.to_string(), v]);
    let list = |v: &[usize]| {
        v.iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" > ")
    };
    put("algebra", name.to_string());
    put("p", f.p.to_string());
    put("dim", f.dim.to_string());
    put(
        "nonzero structure constants",
        l.nonzero_constants().to_string(),
    );
    put("derived series", list(&f.derived_dims));
    put("lower central series", list(&f.lower_central_dims));
    put("center", f.center_dim.to_string());
    put("killing form rank", f.killing_rank.to_string());
    put("solvable", l.is_solvable().to_string());
    put("perfect core", l.perfect_core().dim().to_string());
    put(
        "nilradical",
        nilradical(l, cfg).map_err(internal)?.dim().to_string(),
    );
    put(
        "solvable radical",
        solvable_radical(l, cfg)
            .map_err(internal)?
            .dim()
            .to_string(),
    );
    let (simple, status) = match is_simple(l, cfg) {
        SimplicityVerdict::Simple(_) => ("yes", Status::Pass),
        SimplicityVerdict::NotSimple(_) => ("no", Status::Pass),
        SimplicityVerdict::Unknown { .. } => ("unknown", Status::Unknown),
    };
    put("simple", simple.to_string());
    let report = simple_constituents(l, cfg).map_err(internal)?;
    let dims = report.constituent_dims();
    put(
        "simple constituents",
        if dims.is_empty() {
            "none".to_string()
        } else {
            dims.iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        },
    );
    Ok((g, status))
}

pub fn render_analysis(grid: &Grid, format: Format, name: &str) -> String {
    grid.render(format, &format!("Structure of {name}"))
}
