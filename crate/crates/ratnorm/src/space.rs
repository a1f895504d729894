//! Text forms of spaces and weights.
//!
//! ```text
//! hardy:<p>            hardy:inf
//! bergman:<p>          (β = 0)
//! bergman:<p>:beta:<β>
//! bergman:<p>:table:<path>   CSV rows "ρ,w", optional header
//! ```

use std::path::Path;

use ratnorm_core::norms::SpaceDescriptor;
use ratnorm_core::weights::RadialWeight;

use crate::error::{CliError, Result};

fn number(s: &str, what: &str) -> Result<f64> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s
            .parse()
            .map_err(|_| CliError::Usage(format!("{what} must be a number, got {s:?}"))),
    }
}

pub fn parse_space(text: &str) -> Result<SpaceDescriptor> {
    let parts: Vec<&str> = text.splitn(4, ':').collect();
    let space = match parts.as_slice() {
        ["hardy", p] => SpaceDescriptor::hardy(number(p, "p")?)?,
        ["bergman", p] => SpaceDescriptor::bergman(number(p, "p")?, RadialWeight::power(0.0)?)?,
        ["bergman", p, "beta", beta] => {
            SpaceDescriptor::bergman(number(p, "p")?, RadialWeight::power(number(beta, "β")?)?)?
        }
        ["bergman", p, "table", path] => SpaceDescriptor::bergman(number(p, "p")?, load_weight_table(Path::new(path))?)?,
        _ => {
            return Err(CliError::Usage(format!(
                "unrecognized space {text:?}; expected hardy:<p>, hardy:inf, bergman:<p>:beta:<β> or bergman:<p>:table:<path>"
            )))
        }
    };
    Ok(space)
}

/// Piecewise-linear weight from a two-column CSV file.
pub fn load_weight_table(path: &Path) -> Result<RadialWeight> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(file);
    let mut table = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(CliError::Usage(format!("weight table row {} needs two columns", i + 1)));
        }
        match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
            (Ok(rho), Ok(w)) => table.push((rho, w)),
            _ if i == 0 => continue,
            _ => return Err(CliError::Usage(format!("weight table row {} is not numeric", i + 1))),
        }
    }
    let label = format!("table:{}", path.display());
    Ok(RadialWeight::tabulated(label, table)?)
}
