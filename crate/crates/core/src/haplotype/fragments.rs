//! Read fragments over heterozygous sites and the synthetic generator.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{derive_seed, rng_from_seed, tags};

/// Sparse read-by-site matrix with entries in {+1, -1}; absent means the
/// read says nothing about that site.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentMatrix {
    n_sites: usize,
    reads: Vec<Vec<(usize, i8)>>,
}

impl FragmentMatrix {
    /// Entries of each read are sorted by site; zeros are dropped.
    pub fn new(n_sites: usize, reads: Vec<Vec<(usize, i8)>>) -> Result<Self> {
        let mut out = Vec::with_capacity(reads.len());
        for (r, mut read) in reads.into_iter().enumerate() {
            read.retain(|&(_, v)| v != 0);
            read.sort_unstable_by_key(|&(s, _)| s);
            for w in read.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidInput(format!(
                        "read {r} lists site {} twice",
                        w[0].0
                    )));
                }
            }
            for &(s, v) in &read {
                if s >= n_sites {
                    return Err(Error::InvalidInput(format!(
                        "read {r} site {s} >= {n_sites}"
                    )));
                }
                if v != 1 && v != -1 {
                    return Err(Error::Value(format!(
                        "read {r} entry {v} not in {{1, -1, 0}}"
                    )));
                }
            }
            if read.is_empty() {
                return Err(Error::InvalidInput(format!("read {r} covers no site")));
            }
            out.push(read);
        }
        Ok(Self {
            n_sites,
            reads: out,
        })
    }

    pub fn from_dense(rows: &[Vec<i8>]) -> Result<Self> {
        let n_sites = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_sites) {
            return Err(Error::Dimension("rows differ in length".into()));
        }
        let reads = rows
            .iter()
            .map(|row| row.iter().enumerate().map(|(s, &v)| (s, v)).collect())
            .collect();
        Self::new(n_sites, reads)
    }

    pub fn n_reads(&self) -> usize {
        self.reads.len()
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn read(&self, r: usize) -> &[(usize, i8)] {
        &self.reads[r]
    }

    pub fn reads(&self) -> &[Vec<(usize, i8)>] {
        &self.reads
    }

    pub fn covered_sites(&self) -> Vec<bool> {
        let mut covered = vec![false; self.n_sites];
        for read in &self.reads {
            for &(s, _) in read {
                covered[s] = true;
            }
        }
        covered
    }

    pub fn to_dense(&self) -> Vec<Vec<i8>> {
        self.reads
            .iter()
            .map(|read| {
                let mut row = vec![0; self.n_sites];
                for &(s, v) in read {
                    row[s] = v;
                }
                row
            })
            .collect()
    }

    /// The reads listed in `rows`, in that order.
    pub fn subset(&self, rows: &[usize]) -> Self {
        Self {
            n_sites: self.n_sites,
            reads: rows.iter().map(|&r| self.reads[r].clone()).collect(),
        }
    }
}

/// Dense CSV, one row per read.
pub fn format_fragments(frags: &FragmentMatrix) -> String {
    let mut out = String::new();
    for row in frags.to_dense() {
        let cells: Vec<String> = row.iter().map(i8::to_string).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Sparse form: `read_id site:val site:val ...`.
pub fn format_fragments_sparse(frags: &FragmentMatrix) -> String {
    let mut out = String::new();
    for (r, read) in frags.reads.iter().enumerate() {
        let _ = write!(out, "r{r}");
        for &(s, v) in read {
            let _ = write!(out, " {s}:{v}");
        }
        out.push('\n');
    }
    out
}

/// Accepts the dense CSV form (commas or whitespace between cells) or the
/// sparse form, detected by a `:` in the first data line. Sparse files
/// take the site count from the largest index seen.
pub fn parse_fragments(text: &str, origin: &Path) -> Result<FragmentMatrix> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let Some(&(_, first)) = lines.first() else {
        return Err(Error::parse(origin, 0, "no fragments"));
    };
    let sparse = first.contains(':');
    let mut reads = Vec::with_capacity(lines.len());
    let mut n_sites = 0;
    for &(lineno, line) in &lines {
        let mut read = Vec::new();
        if sparse {
            for tok in line.split_whitespace().skip(1) {
                let (s, v) = tok.split_once(':').ok_or_else(|| {
                    Error::parse(origin, lineno, format!("expected site:value, got {tok:?}"))
                })?;
                let s: usize = s
                    .parse()
                    .map_err(|_| Error::parse(origin, lineno, format!("bad site index {s:?}")))?;
                if read.iter().any(|&(x, _)| x == s) {
                    return Err(Error::parse(
                        origin,
                        lineno,
                        format!("site {s} listed twice"),
                    ));
                }
                let v = parse_entry(v, origin, lineno)?;
                n_sites = n_sites.max(s + 1);
                read.push((s, v));
            }
        } else {
            let cells: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|c| !c.is_empty())
                .collect();
            if reads.is_empty() {
                n_sites = cells.len();
            } else if cells.len() != n_sites {
                return Err(Error::parse(
                    origin,
                    lineno,
                    format!("expected {n_sites} cells, found {}", cells.len()),
                ));
            }
            for (s, c) in cells.into_iter().enumerate() {
                read.push((s, parse_entry(c, origin, lineno)?));
            }
        }
        if read.iter().all(|&(_, v)| v == 0) {
            return Err(Error::parse(origin, lineno, "read covers no site"));
        }
        reads.push(read);
    }
    FragmentMatrix::new(n_sites, reads)
}

fn parse_entry(tok: &str, origin: &Path, lineno: usize) -> Result<i8> {
    let v: i64 = tok
        .parse()
        .map_err(|_| Error::parse(origin, lineno, format!("bad entry {tok:?}")))?;
    match v {
        -1..=1 => Ok(v as i8),
        _ => Err(Error::Value(format!(
            "{}:{lineno}: entry {v} not in {{1, -1, 0}}",
            origin.display()
        ))),
    }
}

pub fn read_fragments(path: &Path) -> Result<FragmentMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_fragments(&text, path)
}

pub fn write_fragments(frags: &FragmentMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, format_fragments(frags)).map_err(|e| Error::io(path, e))
}

/// Truth haplotype: +1/-1 separated by whitespace.
pub fn parse_haplotype(text: &str, origin: &Path) -> Result<Vec<i8>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for tok in line.split_whitespace() {
            match tok {
                "1" | "+1" => out.push(1),
                "-1" => out.push(-1),
                _ => {
                    return Err(Error::parse(
                        origin,
                        i + 1,
                        format!("bad haplotype entry {tok:?}"),
                    ))
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::parse(origin, 0, "empty haplotype"));
    }
    Ok(out)
}

pub fn format_haplotype(h: &[i8]) -> String {
    let cells: Vec<String> = h.iter().map(i8::to_string).collect();
    cells.join(" ") + "\n"
}

pub fn read_haplotype(path: &Path) -> Result<Vec<i8>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_haplotype(&text, path)
}

pub fn write_haplotype(h: &[i8], path: &Path) -> Result<()> {
    std::fs::write(path, format_haplotype(h)).map_err(|e| Error::io(path, e))
}

/// Diploid reads from a random haplotype pair. A tiling of windows
/// overlapping by one site comes first so every adjacent site pair is
/// co-covered; the remaining reads get uniform random windows. Reads are
/// ordered by start position.
pub fn gen_synthetic_diploid(
    n_sites: usize,
    n_reads: usize,
    read_len: usize,
    error_rate: f64,
    seed: u64,
) -> Result<(FragmentMatrix, Vec<i8>)> {
    if read_len < 2 || read_len > n_sites {
        return Err(Error::InvalidConfig(format!(
            "read length {read_len} outside 2..={n_sites}"
        )));
    }
    if !(0.0..=0.5).contains(&error_rate) {
        return Err(Error::InvalidConfig(format!(
            "error rate {error_rate} outside [0, 0.5]"
        )));
    }
    let mut starts: Vec<usize> = (0..n_sites - read_len).step_by(read_len - 1).collect();
    starts.push(n_sites - read_len);
    if n_reads < starts.len() {
        return Err(Error::InvalidConfig(format!(
            "{n_reads} reads cannot tile {n_sites} sites with length {read_len}; need {}",
            starts.len()
        )));
    }
    let mut rng = rng_from_seed(derive_seed(seed, tags::SYNTH, 0));
    let truth: Vec<i8> = (0..n_sites)
        .map(|_| if rng.random_bool(0.5) { 1 } else { -1 })
        .collect();
    while starts.len() < n_reads {
        starts.push(rng.random_range(0..=n_sites - read_len));
    }
    starts.sort_unstable();
    let reads = starts
        .into_iter()
        .map(|start| {
            let sign: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
            (start..start + read_len)
                .map(|s| {
                    let v = sign * truth[s];
                    let flip = error_rate > 0.0 && rng.random_bool(error_rate);
                    (s, if flip { -v } else { v })
                })
                .collect()
        })
        .collect();
    Ok((FragmentMatrix::new(n_sites, reads)?, truth))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_dense_rows() {
        let f = parse_fragments("1 -1 0\n-1 1 0\n", Path::new("t")).unwrap();
        assert_eq!((f.n_reads(), f.n_sites()), (2, 3));
        assert_eq!(f.read(0), &[(0, 1), (1, -1)]);
        let f = parse_fragments("1,-1,0\n0,0,1\n", Path::new("t")).unwrap();
        assert_eq!(f.read(1), &[(2, 1)]);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_fragments("", Path::new("t")),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_fragments("1 2 0\n", Path::new("t")),
            Err(Error::Value(_))
        ));
        for (text, bad_line) in [
            ("1 0\n1 x\n", 2),
            ("1 0\n0 0\n", 2),
            ("1 0\n1 0 1\n", 2),
            ("r0 1:1 1:-1\n", 1),
        ] {
            match parse_fragments(text, Path::new("t")) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, bad_line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn sparse_and_dense_agree() {
        let (f, _) = gen_synthetic_diploid(20, 12, 4, 0.1, 3).unwrap();
        let dense = parse_fragments(&format_fragments(&f), Path::new("t")).unwrap();
        assert_eq!(dense, f);
        let sparse = parse_fragments(&format_fragments_sparse(&f), Path::new("t")).unwrap();
        assert_eq!(sparse, f);
    }

    #[test]
    fn haplotype_round_trip() {
        let h = vec![1, -1, -1, 1];
        assert_eq!(
            parse_haplotype(&format_haplotype(&h), Path::new("t")).unwrap(),
            h
        );
        assert!(parse_haplotype("1 0", Path::new("t")).is_err());
    }

    #[test]
    fn synthetic_is_deterministic_and_tiles() {
        let (a, ta) = gen_synthetic_diploid(60, 150, 8, 0.0, 7).unwrap();
        let (b, tb) = gen_synthetic_diploid(60, 150, 8, 0.0, 7).unwrap();
        assert_eq!((&a, &ta), (&b, &tb));
        assert_eq!(a.n_reads(), 150);
        for s in 0..59 {
            assert!(a
                .reads()
                .iter()
                .any(|r| r.iter().any(|&(x, _)| x == s) && r.iter().any(|&(x, _)| x == s + 1)));
        }
        // clean reads copy one haplotype exactly
        for read in a.reads() {
            let sign = read[0].1 * ta[read[0].0];
            assert!(read.iter().all(|&(s, v)| v == sign * ta[s]));
        }
        let starts: Vec<usize> = a.reads().iter().map(|r| r[0].0).collect();
        assert!(starts.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn synthetic_rejects_bad_shapes() {
        assert!(gen_synthetic_diploid(10, 20, 1, 0.0, 0).is_err());
        assert!(gen_synthetic_diploid(60, 3, 8, 0.0, 0).is_err());
        assert!(gen_synthetic_diploid(60, 30, 8, 0.7, 0).is_err());
    }
}
