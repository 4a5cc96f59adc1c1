//! Write trajectory CSV files and SVG plots for the two reference extremals
//! h0 = (1/2, √3/2, 1) and (1/2, √3/2, 0.7) into a directory (default: the
//! system temp dir).
use std::path::PathBuf;

use halfdisk::cli::{cmd_exp, cmd_svg, ExpArgs, Format, SvgArgs};
use halfdisk::pmp::SEPARATRIX_TOL;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    std::fs::create_dir_all(&dir)?;
    for (name, h3) in [("left", 1.0), ("right", 0.7)] {
        let csv = cmd_exp(&ExpArgs {
            h0: [0.5, 3f64.sqrt() / 2.0, h3],
            total_time: 20.0,
            samples: 2001,
            format: Format::Csv,
            renormalize: false,
            separatrix_tol: SEPARATRIX_TOL,
            out: None,
        })?;
        let csv_path = dir.join(format!("extremal-{name}.csv"));
        std::fs::write(&csv_path, csv)?;
        let svg = cmd_svg(&SvgArgs {
            input: csv_path.clone(),
            out: None,
        })?;
        let svg_path = dir.join(format!("extremal-{name}.svg"));
        std::fs::write(&svg_path, svg)?;
        println!("wrote {} and {}", csv_path.display(), svg_path.display());
    }
    Ok(())
}
