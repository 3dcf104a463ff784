//! Field snapshots: CSV `(s, t, v)` and the little-endian `ACL1` grid format.
//!
//! `ACL1` layout: magic `b"ACL1"`, `u32 n_s`, `u32 n_t`, four `f64` bounds
//! `(s_min, s_max, t_min, t_max)`, the `n_s` s-nodes, the `n_t` t-nodes, then
//! `n_s · n_t` values row-major in `s`. All numbers are little-endian.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::grid::SolutionField;

const MAGIC: &[u8; 4] = b"ACL1";

/// Grid nodes and values as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSnapshot {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
}

impl GridSnapshot {
    pub fn from_field<T: Real>(field: &SolutionField<T>) -> Self {
        let conv = |x: &[T]| x.iter().map(|v| v.as_f64()).collect();
        Self {
            s: conv(&field.s),
            t: conv(&field.t),
            values: conv(&field.values),
        }
    }

    pub fn write_binary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&(self.s.len() as u32).to_le_bytes())?;
        out.write_all(&(self.t.len() as u32).to_le_bytes())?;
        let bounds = [self.s[0], self.s[self.s.len() - 1], self.t[0], self.t[self.t.len() - 1]];
        for x in bounds.iter().chain(&self.s).chain(&self.t).chain(&self.values) {
            out.write_all(&x.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let io = |e: std::io::Error| Error::Format(format!("truncated ACL1 data: {e}"));
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic).map_err(io)?;
        if &magic != MAGIC {
            return Err(Error::Format("missing ACL1 magic".into()));
        }
        let mut word = [0u8; 4];
        input.read_exact(&mut word).map_err(io)?;
        let n_s = u32::from_le_bytes(word) as usize;
        input.read_exact(&mut word).map_err(io)?;
        let n_t = u32::from_le_bytes(word) as usize;
        if n_s < 2 || n_t < 2 {
            return Err(Error::Format(format!("degenerate ACL1 grid {n_s}×{n_t}")));
        }
        let mut read = |count: usize| -> Result<Vec<f64>> {
            let mut buf = vec![0u8; count * 8];
            input.read_exact(&mut buf).map_err(io)?;
            Ok(buf
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
                .collect())
        };
        let bounds = read(4)?;
        let s = read(n_s)?;
        let t = read(n_t)?;
        let values = read(n_s * n_t)?;
        if bounds != [s[0], s[n_s - 1], t[0], t[n_t - 1]] {
            return Err(Error::Format("ACL1 bounds disagree with the node arrays".into()));
        }
        let mut rest = Vec::new();
        input.read_to_end(&mut rest).map_err(io)?;
        if !rest.is_empty() {
            return Err(Error::Format(format!("{} trailing bytes after ACL1 data", rest.len())));
        }
        Ok(Self { s, t, values })
    }

    /// CSV with header `s,t,v`, one node per line, `s` outermost.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "s,t,v")?;
        let n_t = self.t.len();
        for (i, s) in self.s.iter().enumerate() {
            for (j, t) in self.t.iter().enumerate() {
                writeln!(out, "{:.16e},{:.16e},{:.16e}", s, t, self.values[i * n_t + j])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> GridSnapshot {
        GridSnapshot {
            s: vec![2.0, 3.5, 8.0],
            t: vec![0.0, 0.5, std::f64::consts::FRAC_PI_2],
            values: (0..9).map(|k| 1.0 / (1.0 + k as f64)).collect(),
        }
    }

    #[test]
    fn binary_round_trip_is_exact() {
        let snap = sample();
        let mut buf = Vec::new();
        snap.write_binary(&mut buf).unwrap();
        assert_eq!(buf.len(), 4 + 8 + 8 * (4 + 3 + 3 + 9));
        assert_eq!(GridSnapshot::read_binary(&buf[..]).unwrap(), snap);
    }

    #[test]
    fn rejects_corrupt_binary() {
        let mut buf = Vec::new();
        sample().write_binary(&mut buf).unwrap();
        assert!(GridSnapshot::read_binary(&buf[..buf.len() - 1]).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(GridSnapshot::read_binary(&bad[..]).is_err());
        let mut long = buf;
        long.push(0);
        assert!(GridSnapshot::read_binary(&long[..]).is_err());
    }

    #[test]
    fn csv_round_trips_values() {
        let snap = sample();
        let mut buf = Vec::new();
        snap.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("s,t,v"));
        let parsed: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
        assert_eq!(parsed, snap.values);
    }
}
