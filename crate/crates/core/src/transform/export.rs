//! Instance file formats.
//!
//! * QUBO JSON: `{"m", "lambda", "constant", "diag": [..], "offdiag": [[i, j, q], ..]}`
//! * QUBO text: `#` comment lines, one `n <m>` header, then `<i> <i> <d_i>`
//!   for linear terms and `<i> <j> <q_ij>` (`i < j`) for folded couplings,
//!   0-based. The constant and penalty ride along as `# constant <c>` and
//!   `# lambda <l>` comments.
//! * Ising JSON: `{"m", "h": [..], "J": [[i, j, J_ij], ..], "offset"}`
//!
//! Numbers in the text format carry 17 significant digits.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{IsingInstance, QuboInstance};
use crate::error::{Error, Result};
use crate::numfmt::format_sig17;

#[derive(Serialize, Deserialize)]
struct QuboJson {
    m: usize,
    lambda: Option<f64>,
    constant: f64,
    diag: Vec<f64>,
    offdiag: Vec<(usize, usize, f64)>,
}

#[derive(Serialize, Deserialize)]
struct IsingJson {
    m: usize,
    h: Vec<f64>,
    #[serde(rename = "J")]
    couplings: Vec<(usize, usize, f64)>,
    offset: f64,
}

fn triples(map: &BTreeMap<(usize, usize), f64>) -> Vec<(usize, usize, f64)> {
    map.iter().map(|(&(i, j), &v)| (i, j, v)).collect()
}

fn check_len(declared: usize, actual: usize) -> Result<()> {
    if declared != actual {
        return Err(Error::Schema(format!(
            "declared {declared} variables but listed {actual}"
        )));
    }
    Ok(())
}

pub fn write_qubo_json<W: Write>(qubo: &QuboInstance, mut writer: W) -> Result<()> {
    let doc = QuboJson {
        m: qubo.len(),
        lambda: qubo.lambda(),
        constant: qubo.constant(),
        diag: qubo.diag().to_vec(),
        offdiag: triples(qubo.offdiag()),
    };
    serde_json::to_writer(&mut writer, &doc)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_qubo_json<R: std::io::Read>(reader: R) -> Result<QuboInstance> {
    let doc: QuboJson = serde_json::from_reader(reader)?;
    check_len(doc.m, doc.diag.len())?;
    let offdiag = doc
        .offdiag
        .into_iter()
        .map(|(i, j, v)| ((i, j), v))
        .collect();
    QuboInstance::new(doc.diag, offdiag, doc.constant, doc.lambda)
}

pub fn write_qubo_text<W: Write>(qubo: &QuboInstance, mut writer: W) -> Result<()> {
    writeln!(
        writer,
        "# coalition structure QUBO (minimise x^T Q x + constant)"
    )?;
    writeln!(writer, "# constant {}", format_sig17(qubo.constant()))?;
    if let Some(lambda) = qubo.lambda() {
        writeln!(writer, "# lambda {}", format_sig17(lambda))?;
    }
    writeln!(writer, "n {}", qubo.len())?;
    for (i, d) in qubo.diag().iter().enumerate() {
        writeln!(writer, "{i} {i} {}", format_sig17(*d))?;
    }
    for (&(i, j), q) in qubo.offdiag() {
        writeln!(writer, "{i} {j} {}", format_sig17(*q))?;
    }
    Ok(())
}

pub fn read_qubo_text<R: BufRead>(reader: R) -> Result<QuboInstance> {
    let mut m: Option<usize> = None;
    let mut diag: Vec<Option<f64>> = Vec::new();
    let mut offdiag = BTreeMap::new();
    let mut constant = 0.0;
    let mut lambda = None;

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = lineno + 1;
        let parse_err = |column: usize, message: String| Error::Parse {
            line: line_no,
            column,
            message,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            let mut words = comment.split_whitespace();
            match (words.next(), words.next()) {
                (Some("constant"), Some(v)) => {
                    constant = v
                        .parse()
                        .map_err(|e| parse_err(1, format!("bad constant: {e}")))?
                }
                (Some("lambda"), Some(v)) => {
                    lambda = Some(
                        v.parse()
                            .map_err(|e| parse_err(1, format!("bad lambda: {e}")))?,
                    )
                }
                _ => {}
            }
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            ["n", count] => {
                if m.is_some() {
                    return Err(parse_err(1, "duplicate `n` header".into()));
                }
                let count: usize = count
                    .parse()
                    .map_err(|e| parse_err(3, format!("bad variable count: {e}")))?;
                m = Some(count);
                diag = vec![None; count];
            }
            [i, j, v] => {
                let m = m.ok_or_else(|| parse_err(1, "term before `n` header".into()))?;
                let i: usize = i
                    .parse()
                    .map_err(|e| parse_err(1, format!("bad index: {e}")))?;
                let j: usize = j
                    .parse()
                    .map_err(|e| parse_err(1, format!("bad index: {e}")))?;
                let v: f64 = v
                    .parse()
                    .map_err(|e| parse_err(1, format!("bad value: {e}")))?;
                if i >= m || j >= m {
                    return Err(parse_err(
                        1,
                        format!("index out of range for {m} variables"),
                    ));
                }
                if i == j {
                    if diag[i].replace(v).is_some() {
                        return Err(parse_err(1, format!("duplicate linear term {i}")));
                    }
                } else if i < j {
                    if offdiag.insert((i, j), v).is_some() {
                        return Err(parse_err(1, format!("duplicate coupling ({i}, {j})")));
                    }
                } else {
                    return Err(parse_err(1, format!("coupling ({i}, {j}) must have i < j")));
                }
            }
            _ => return Err(parse_err(1, format!("unrecognised line `{trimmed}`"))),
        }
    }

    if m.is_none() {
        return Err(Error::Schema("missing `n <m>` header".into()));
    }
    let diag = diag.into_iter().map(|d| d.unwrap_or(0.0)).collect();
    QuboInstance::new(diag, offdiag, constant, lambda)
}

pub fn write_ising_json<W: Write>(ising: &IsingInstance, mut writer: W) -> Result<()> {
    let doc = IsingJson {
        m: ising.len(),
        h: ising.fields().to_vec(),
        couplings: triples(ising.couplings()),
        offset: ising.offset(),
    };
    serde_json::to_writer(&mut writer, &doc)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_ising_json<R: std::io::Read>(reader: R) -> Result<IsingInstance> {
    let doc: IsingJson = serde_json::from_reader(reader)?;
    check_len(doc.m, doc.h.len())?;
    let couplings = doc
        .couplings
        .into_iter()
        .map(|(i, j, v)| ((i, j), v))
        .collect();
    IsingInstance::new(doc.h, couplings, doc.offset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{generate_game, DistributionKind};
    use crate::transform::{build_bilp, build_qubo, qubo_to_ising};

    fn sample_qubo() -> QuboInstance {
        let g = generate_game(3, &DistributionKind::Laplace.into(), 4).unwrap();
        build_qubo(&build_bilp(&g, &[]).unwrap(), None).unwrap()
    }

    #[test]
    fn qubo_text_round_trip_is_exact() {
        let q = sample_qubo();
        let mut buf = Vec::new();
        write_qubo_text(&q, &mut buf).unwrap();
        let back = read_qubo_text(buf.as_slice()).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn qubo_json_round_trip() {
        let q = sample_qubo();
        let mut buf = Vec::new();
        write_qubo_json(&q, &mut buf).unwrap();
        assert_eq!(read_qubo_json(buf.as_slice()).unwrap(), q);
    }

    #[test]
    fn ising_json_round_trip() {
        let ising = qubo_to_ising(&sample_qubo());
        let mut buf = Vec::new();
        write_ising_json(&ising, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.contains("\"J\":[[0,2,"));
        assert_eq!(read_ising_json(buf.as_slice()).unwrap(), ising);
    }

    #[test]
    fn text_parse_errors_carry_line() {
        let bad = "# header\nn 2\n0 0 -1\n1 0 3\n";
        match read_qubo_text(bad.as_bytes()).unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other}"),
        }
        assert!(matches!(
            read_qubo_text("0 0 1\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            read_qubo_text("# empty\n".as_bytes()),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn missing_linear_terms_default_to_zero() {
        let q = read_qubo_text("n 3\n0 2 1.5\n".as_bytes()).unwrap();
        assert_eq!(q.diag(), &[0.0, 0.0, 0.0]);
        assert_eq!(q.offdiag()[&(0, 2)], 1.5);
        assert_eq!(q.lambda(), None);
    }
}
