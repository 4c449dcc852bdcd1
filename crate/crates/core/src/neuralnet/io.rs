use std::io::{Read, Write};

use super::{Architecture, NetworkParams};
use crate::error::{Error, Result};

/// One row per entry of `θ(h)`: `layer,kind,row,col,value`, with `kind`
/// `w` or `b` and 1-based layer index. Rows follow the `θ(h)` ordering.
pub fn write_params_csv<W: Write>(params: &NetworkParams, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["layer", "kind", "row", "col", "value"])?;
    for (j, (wm, b)) in params.weights().iter().zip(params.biases()).enumerate() {
        let layer = (j + 1).to_string();
        for c in 0..wm.ncols() {
            for r in 0..wm.nrows() {
                w.write_record([
                    layer.as_str(),
                    "w",
                    &r.to_string(),
                    &c.to_string(),
                    &format!("{:?}", wm[[r, c]]),
                ])?;
            }
        }
        for (r, v) in b.iter().enumerate() {
            w.write_record([layer.as_str(), "b", &r.to_string(), "0", &format!("{v:?}")])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a snapshot written by [`write_params_csv`] for the given architecture.
pub fn read_params_csv<R: Read>(arch: &Architecture, input: R) -> Result<NetworkParams> {
    let mut params = NetworkParams::zeros(arch);
    let mut seen = vec![false; arch.param_count()];
    let mut rd = csv::Reader::from_reader(input);
    let bad = |row: usize, msg: String| Error::Parse { path: "<params>".into(), row, msg };
    for (i, rec) in rd.records().enumerate() {
        let rec = rec?;
        let row = i + 2;
        if rec.len() != 5 {
            return Err(bad(row, format!("expected 5 fields, got {}", rec.len())));
        }
        let num = |k: usize| -> Result<usize> {
            rec[k].trim().parse().map_err(|_| bad(row, format!("bad index `{}`", &rec[k])))
        };
        let layer = num(0)?;
        let (r, c) = (num(2)?, num(3)?);
        let value: f64 =
            rec[4].trim().parse().map_err(|_| bad(row, format!("bad value `{}`", &rec[4])))?;
        if layer == 0 || layer > params.num_layers() {
            return Err(bad(row, format!("layer {layer} out of range")));
        }
        let j = layer - 1;
        let offset: usize = arch.widths().windows(2).take(j).map(|p| p[0] * p[1] + p[1]).sum();
        let slot = match rec[1].trim() {
            "w" => {
                let wm = &mut params.weights[j];
                if r >= wm.nrows() || c >= wm.ncols() {
                    return Err(bad(row, format!("index ({r},{c}) out of range")));
                }
                wm[[r, c]] = value;
                offset + c * wm.nrows() + r
            }
            "b" => {
                let b = &mut params.biases[j];
                if r >= b.len() || c != 0 {
                    return Err(bad(row, format!("bias index ({r},{c}) out of range")));
                }
                b[r] = value;
                offset + params.weights[j].len() + r
            }
            k => return Err(bad(row, format!("unknown kind `{k}`"))),
        };
        if std::mem::replace(&mut seen[slot], true) {
            return Err(bad(row, "duplicate entry".into()));
        }
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        return Err(bad(0, format!("missing entry at θ index {missing}")));
    }
    params.check_shapes(arch)?;
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::neuralnet::init_params;

    #[test]
    fn csv_roundtrip() {
        let arch = Architecture::classifier(3, 2, 5).unwrap();
        let p = init_params(&arch, 12);
        let mut buf = Vec::new();
        write_params_csv(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("layer,kind,row,col,value\n1,w,0,0,"));
        assert_eq!(text.lines().count(), arch.param_count() + 1);
        assert_eq!(read_params_csv(&arch, buf.as_slice()).unwrap(), p);
    }

    #[test]
    fn csv_rejects_missing_rows() {
        let arch = Architecture::classifier(1, 1, 1).unwrap();
        let text = "layer,kind,row,col,value\n1,w,0,0,1.0\n";
        assert!(read_params_csv(&arch, text.as_bytes()).is_err());
    }
}
