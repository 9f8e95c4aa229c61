//! Plain-text outputs: solution fields and traces as CSV, reports as JSON.
//! Numbers use the shortest representation that round-trips, so equal
//! inputs give byte-identical files.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::field::{Provenance, SolutionField};
use crate::grid::{SpaceTimeGrid, TimeSeries};
use crate::scalar::{to_f64, Scalar};

/// Version of the field document layout.
pub const FIELD_SCHEMA_VERSION: u32 = 1;

/// A solution field with its grid, as written to JSON. `u[i][j]` is the
/// value at `x[i]`, `t[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDocument {
    pub schema_version: u32,
    pub provenance: Provenance,
    pub grid: SpaceTimeGrid<f64>,
    pub error_estimate: f64,
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub u: Vec<Vec<f64>>,
}

impl FieldDocument {
    pub fn new<T: Scalar>(field: &SolutionField<T>) -> Self {
        let g = field.grid();
        Self {
            schema_version: FIELD_SCHEMA_VERSION,
            provenance: field.provenance(),
            grid: SpaceTimeGrid {
                nx: g.nx,
                nt: g.nt,
                t_max: to_f64(g.t_max),
            },
            error_estimate: to_f64(field.error_estimate),
            x: g.xs().into_iter().map(to_f64).collect(),
            t: g.ts().into_iter().map(to_f64).collect(),
            u: field
                .values()
                .rows()
                .into_iter()
                .map(|r| r.iter().map(|v| to_f64(*v)).collect())
                .collect(),
        }
    }
}

/// Rows `x,t,u,provenance`, time-major.
pub fn write_field_csv<T: Scalar, W: Write>(
    field: &SolutionField<T>,
    mut out: W,
) -> io::Result<()> {
    let grid = field.grid();
    let tag = field.provenance().as_str();
    writeln!(out, "x,t,u,provenance")?;
    for j in 1..=grid.nt {
        let t = to_f64(grid.t(j));
        for i in 0..grid.nx {
            writeln!(
                out,
                "{},{},{},{}",
                to_f64(grid.x(i)),
                t,
                to_f64(field.at(i, j)),
                tag
            )?;
        }
    }
    Ok(())
}

/// Rows `t,value`.
pub fn write_series_csv<T: Scalar, W: Write>(series: &TimeSeries<T>, mut out: W) -> io::Result<()> {
    writeln!(out, "t,value")?;
    for (t, v) in series.t.iter().zip(&series.values) {
        writeln!(out, "{},{}", to_f64(*t), to_f64(*v))?;
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Provenance;
    use crate::grid::SpaceTimeGrid;
    use ndarray::Array2;

    #[test]
    fn field_rows() {
        let grid = SpaceTimeGrid::new(3, 2, 1.0).unwrap();
        let values = Array2::from_shape_vec((3, 2), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let field = SolutionField::new(values, grid, Provenance::L1Oracle, 0.0).unwrap();
        let mut buf = Vec::new();
        write_field_csv(&field, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "x,t,u,provenance\n0,0.5,1,l1_oracle\n0.5,0.5,3,l1_oracle\n1,0.5,5,l1_oracle\n\
             0,1,2,l1_oracle\n0.5,1,4,l1_oracle\n1,1,6,l1_oracle\n"
        );
    }

    #[test]
    fn field_document_layout() {
        let grid = SpaceTimeGrid::new(3, 2, 1.0).unwrap();
        let values = Array2::from_shape_vec((3, 2), vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let field = SolutionField::new(values, grid, Provenance::Representation, 0.5).unwrap();
        let doc = FieldDocument::new(&field);
        assert_eq!(doc.u[1], vec![3.0, 4.0]);
        assert_eq!(doc.t, vec![0.5, 1.0]);
        let text = to_json(&doc);
        assert!(text.contains("\"provenance\": \"representation\""));
        assert_eq!(serde_json::from_str::<FieldDocument>(&text).unwrap(), doc);
    }

    #[test]
    fn json_ends_with_newline() {
        assert_eq!(to_json(&[1.5]), "[\n  1.5\n]\n");
    }
}
