//! File ingestion: JSON (the module schemas) plus CSV for family-shaped
//! inputs, where columns are functions, rows are points, and a `weight`
//! column carries the measure.

use std::fs;
use std::io::Read;
use std::sync::Arc;

use chebcorr::input::FamilyFile;
use chebcorr::{Error, FunctionFamily, MeasureSpace, Result, Scalar, Tier};

/// Read a file, or standard input when the path is `-`.
pub fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::InvalidInput {
                reason: format!("reading stdin: {e}"),
            })?;
        return Ok(buf);
    }
    fs::read_to_string(path).map_err(|e| Error::InvalidInput {
        reason: format!("reading `{path}`: {e}"),
    })
}

/// Load a function family from JSON or (by extension) CSV.
pub fn load_family(path: &str, tier: Tier) -> Result<FunctionFamily> {
    let text = read_input(path)?;
    if path.ends_with(".csv") {
        family_from_csv(&text, tier)
    } else {
        FamilyFile::parse(&text)?.resolve(tier)
    }
}

/// CSV layout: a header with an optional `point` column, a required
/// `weight` column, and one column per function; one row per point.
fn family_from_csv(text: &str, tier: Tier) -> Result<FunctionFamily> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| Error::InvalidInput {
            reason: format!("csv header: {e}"),
        })?
        .iter()
        .map(|h| h.to_string())
        .collect();

    let point_col = headers.iter().position(|h| h == "point");
    let weight_col = headers
        .iter()
        .position(|h| h == "weight")
        .ok_or_else(|| Error::InvalidInput {
            reason: "csv input needs a `weight` column".into(),
        })?;
    let function_cols: Vec<(usize, String)> = headers
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != point_col && *i != weight_col)
        .map(|(i, h)| (i, h.clone()))
        .collect();
    if function_cols.is_empty() {
        return Err(Error::InvalidInput {
            reason: "csv input has no function columns".into(),
        });
    }

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut table: Vec<Vec<Scalar>> = vec![Vec::new(); function_cols.len()];
    for (row_idx, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::InvalidInput {
            reason: format!("csv row {}: {e}", row_idx + 1),
        })?;
        let field = |col: usize| -> Result<&str> {
            record.get(col).ok_or_else(|| Error::InvalidInput {
                reason: format!("csv row {} is missing column {col}", row_idx + 1),
            })
        };
        points.push(match point_col {
            Some(c) => field(c)?.to_string(),
            None => (row_idx + 1).to_string(),
        });
        weights.push(Scalar::parse(field(weight_col)?, tier)?);
        for (slot, (col, _)) in function_cols.iter().enumerate() {
            table[slot].push(Scalar::parse(field(*col)?, tier)?);
        }
    }

    let space = Arc::new(MeasureSpace::new_degenerate(points, weights)?);
    FunctionFamily::new(
        space,
        function_cols.into_iter().map(|(_, name)| name).collect(),
        table,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_family_parses() {
        let text = "point,weight,f,g\na,1,0,0\nb,1,1,1\n";
        let fam = family_from_csv(text, Tier::Exact).unwrap();
        assert_eq!(fam.k(), 2);
        assert_eq!(fam.space().points(), &["a".to_string(), "b".to_string()]);
        assert_eq!(fam.value(0, 1), &Scalar::int(1));
    }

    #[test]
    fn csv_without_point_column_numbers_rows() {
        let text = "weight,f\n1,3\n2,4\n";
        let fam = family_from_csv(text, Tier::Exact).unwrap();
        assert_eq!(fam.space().points(), &["1".to_string(), "2".to_string()]);
        assert_eq!(fam.space().weight(1), &Scalar::int(2));
    }

    #[test]
    fn csv_requires_weight_column() {
        let text = "point,f\na,1\n";
        assert!(family_from_csv(text, Tier::Exact).is_err());
    }
}
