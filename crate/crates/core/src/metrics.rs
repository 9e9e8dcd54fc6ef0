//! Measurement histograms and the Kullback-Leibler divergence used to
//! score a run against the uniform distribution.

use crate::error::{ApsError, Result};

/// Formats a basis-state index as a bitstring, most significant bit first.
pub fn format_bitstring(x: u64, width: u32) -> String {
    format!("{:0width$b}", x, width = width as usize)
}

/// Parses a bitstring written most significant bit first.
pub fn parse_bitstring(s: &str) -> Result<(u64, u32)> {
    if s.is_empty() || s.len() > 63 || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(ApsError::Parse(format!("invalid bitstring {s:?}")));
    }
    let value = u64::from_str_radix(s, 2).map_err(|e| ApsError::Parse(e.to_string()))?;
    Ok((value, s.len() as u32))
}

/// Normalized distribution over the `2^n_bits` work bitstrings, either an
/// exact marginal (`shots = 0`) or frequencies from a sampled run.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    n_bits: u32,
    probs: Vec<f64>,
    shots: u64,
}

impl Histogram {
    /// Exact-mode histogram holding the distribution itself.
    pub fn exact(n_bits: u32, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1 << n_bits {
            return Err(ApsError::InvalidDistribution(format!(
                "{} entries for {n_bits} bits",
                probs.len()
            )));
        }
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) || (total - 1.0).abs() > 1e-9 {
            return Err(ApsError::InvalidDistribution(format!(
                "entries must be non-negative and sum to 1 (sum = {total})"
            )));
        }
        Ok(Self {
            n_bits,
            probs,
            shots: 0,
        })
    }

    /// Histogram of sampled counts, normalized by the total.
    pub fn from_counts(n_bits: u32, counts: &[u64]) -> Self {
        debug_assert_eq!(counts.len(), 1 << n_bits);
        let shots: u64 = counts.iter().sum();
        let total = shots.max(1) as f64;
        Self {
            n_bits,
            probs: counts.iter().map(|&c| c as f64 / total).collect(),
            shots,
        }
    }

    pub fn n_bits(&self) -> u32 {
        self.n_bits
    }

    /// 0 means the histogram is an exact distribution.
    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    pub fn probability(&self, x: usize) -> f64 {
        self.probs[x]
    }

    /// `(state, probability)` rows sorted by descending probability,
    /// ties broken by ascending state index.
    pub fn sorted_rows(&self) -> Vec<(u64, f64)> {
        let mut rows: Vec<(u64, f64)> = self
            .probs
            .iter()
            .enumerate()
            .map(|(x, &p)| (x as u64, p))
            .collect();
        rows.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        rows
    }

    /// Most probable state and its probability.
    pub fn top_state(&self) -> (u64, f64) {
        self.sorted_rows()[0]
    }

    /// CSV with columns `bitstring,probability`, descending probability.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,probability\n");
        for (state, p) in self.sorted_rows() {
            out.push_str(&format_bitstring(state, self.n_bits));
            out.push(',');
            out.push_str(&p.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses a histogram CSV produced by [`Histogram::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some("bitstring,probability") => {}
            other => return Err(ApsError::Parse(format!("bad histogram header: {other:?}"))),
        }
        let mut width = None;
        let mut entries = Vec::new();
        for line in lines {
            if line.is_empty() {
                continue;
            }
            let (bits, prob) = line
                .split_once(',')
                .ok_or_else(|| ApsError::Parse(format!("bad histogram row: {line:?}")))?;
            let (state, w) = parse_bitstring(bits)?;
            if *width.get_or_insert(w) != w {
                return Err(ApsError::Parse("inconsistent bitstring widths".into()));
            }
            let p: f64 = prob
                .parse()
                .map_err(|e| ApsError::Parse(format!("bad probability {prob:?}: {e}")))?;
            entries.push((state, p));
        }
        let width = width.ok_or_else(|| ApsError::Parse("empty histogram".into()))?;
        let mut probs = vec![0.0; 1 << width];
        for (state, p) in entries {
            probs[state as usize] = p;
        }
        Self::exact(width, probs)
    }
}

/// Kullback-Leibler divergence `sum_x P(x) ln(P(x)/Q(x))` in nats.
///
/// Terms with `P(x) = 0` contribute zero; `Q(x) = 0` where `P(x) > 0` is an
/// error.
pub fn kld(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(ApsError::InvalidDistribution(format!(
            "length mismatch: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    for (name, dist) in [("P", p), ("Q", q)] {
        let total: f64 = dist.iter().sum();
        if dist.iter().any(|&v| v < 0.0) || (total - 1.0).abs() > 1e-6 {
            return Err(ApsError::InvalidDistribution(format!(
                "{name} is not a distribution (sum = {total})"
            )));
        }
    }
    let mut total = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Err(ApsError::InvalidDistribution(format!(
                "Q({i}) = 0 where P({i}) > 0"
            )));
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total)
}

/// KLD of `p` from the uniform distribution over the same support.
pub fn kld_vs_uniform(p: &[f64]) -> f64 {
    let n = p.len() as f64;
    p.iter()
        .filter(|&&pi| pi > 0.0)
        .map(|&pi| pi * (pi * n).ln())
        .sum()
}
