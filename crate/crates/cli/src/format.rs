//! Number formatting and the PGM raster.

use std::io::{self, Write};

use cournot_core::{SweepGrid, VerdictClass};

/// Locale-independent scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

pub fn gray(class: VerdictClass) -> u8 {
    match class {
        VerdictClass::Stable => 0,
        VerdictClass::Boundary => 128,
        VerdictClass::Unstable => 255,
        VerdictClass::Infeasible => 64,
    }
}

/// Plain (P2) PGM, maxval 255. Row 0 is the largest y value.
pub fn write_pgm(grid: &SweepGrid, w: &mut impl Write) -> io::Result<()> {
    let (nx, ny) = (grid.x_axis.n, grid.y_axis.n);
    writeln!(w, "P2")?;
    writeln!(
        w,
        "# columns: {} from {} to {}",
        grid.x_axis.param, grid.x_axis.min, grid.x_axis.max
    )?;
    writeln!(
        w,
        "# rows: {} from {} (row 0) down to {}",
        grid.y_axis.param, grid.y_axis.max, grid.y_axis.min
    )?;
    writeln!(w, "# stable=0 boundary=128 unstable=255 infeasible=64")?;
    writeln!(w, "{nx} {ny}")?;
    writeln!(w, "255")?;
    for iy in (0..ny).rev() {
        // keep lines within 70 characters
        let row: Vec<String> = (0..nx)
            .map(|ix| gray(grid.cell(ix, iy).class).to_string())
            .collect();
        for chunk in row.chunks(17) {
            writeln!(w, "{}", chunk.join(" "))?;
        }
    }
    Ok(())
}
