use crate::config::Config;
use crate::error::{Result, SigError};
use crate::signature::PhasePortrait;

/// Times `0 = t_0 < ... < t_n = L` such that on each segment some derivative
/// `f^(k)`, `k >= 1`, stays away from zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    times: Vec<f64>,
    witness_orders: Vec<usize>,
    margins: Vec<f64>,
}

impl Partition {
    pub fn new(times: Vec<f64>, witness_orders: Vec<usize>, margins: Vec<f64>) -> Result<Self> {
        if times.len() < 2 || witness_orders.len() + 1 != times.len() || margins.len() != witness_orders.len() {
            return Err(SigError::InvalidConfig("partition sizes are inconsistent".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(SigError::InvalidConfig("partition times must increase".into()));
        }
        if witness_orders.contains(&0) || margins.iter().any(|&m| !(m > 0.0)) {
            return Err(SigError::InvalidConfig("witnesses need order >= 1 and positive margin".into()));
        }
        Ok(Partition { times, witness_orders, margins })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn witness_orders(&self) -> &[usize] {
        &self.witness_orders
    }

    /// Per-segment `min |f^(k)|` over the samples of the segment.
    pub fn margins(&self) -> &[f64] {
        &self.margins
    }
}

/// Greedy partition of an order-`i` portrait.
///
/// The threshold for order `k` is `max(partition_margin * max|f^(k)|,
/// derivative_floor * scale^(k+1))` with `scale = max|f| + 1/L`. Each segment
/// starts with the order of largest relative size `|f^(k)| / max|f^(k)|` among
/// those meeting their threshold whose sign also holds at the next sample. It
/// extends while that derivative keeps its sign, stays above half the
/// threshold and stays within a factor two of the strongest order.
/// Closed portraits are swept over `[0, L]` including the wrap-around sample.
pub fn find_partition(sig: &PhasePortrait, cfg: &Config) -> Result<Partition> {
    let order = sig.order();
    let mut s = sig.s().to_vec();
    let mut rows = sig.rows().to_vec();
    if sig.closed() && sig.length() > s[s.len() - 1] {
        s.push(sig.length());
        rows.push(rows[0].clone());
    }
    let n = rows.len();
    let scale = rows.iter().fold(0.0_f64, |a, r| a.max(r[0].abs())) + 1.0 / sig.length();
    let maxima: Vec<f64> = (0..=order).map(|k| rows.iter().fold(0.0_f64, |a, r| a.max(r[k].abs()))).collect();
    let thresholds: Vec<f64> = (0..=order)
        .map(|k| (cfg.partition_margin * maxima[k]).max(cfg.derivative_floor * scale.powi(k as i32 + 1)))
        .collect();
    let strength = |j: usize, k: usize| rows[j][k].abs() / maxima[k];
    let strongest = |j: usize| {
        (1..=order).filter(|&k| rows[j][k].abs() >= thresholds[k]).map(|k| strength(j, k)).fold(0.0, f64::max)
    };
    let keep = |j: usize, k: usize, sign: f64| rows[j][k].signum() == sign && rows[j][k].abs() >= 0.5 * thresholds[k];
    // Strongest order meeting its threshold at `i` and keeping its sign through `i + 1`;
    // a sign change between two samples means a zero of that derivative in between.
    let witness = |i: usize| {
        (1..=order)
            .filter(|&k| rows[i][k].abs() >= thresholds[k] && keep(i + 1, k, rows[i][k].signum()))
            .fold(None, |best: Option<usize>, k| match best {
                Some(b) if strength(i, b) >= strength(i, k) => Some(b),
                _ => Some(k),
            })
    };
    let mut times = vec![s[0]];
    let mut orders = Vec::new();
    let mut margins = Vec::new();
    let mut i = 0;
    while i < n - 1 {
        let k = witness(i).ok_or(SigError::ForbiddenPoint { s: 0.5 * (s[i] + s[i + 1]) })?;
        let sign = rows[i][k].signum();
        let mut j = i + 1;
        while j + 1 < n && keep(j + 1, k, sign) && strength(j + 1, k) >= 0.5 * strongest(j + 1) {
            j += 1;
        }
        let margin = rows[i..=j].iter().fold(f64::INFINITY, |a, r| a.min(r[k].abs()));
        times.push(s[j]);
        orders.push(k);
        margins.push(margin);
        i = j;
    }
    Partition::new(times, orders, margins)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{resample_by_arclength, shapes};
    use crate::signature::euclidean_signature;

    #[test]
    fn vertex_free_spiral_is_one_segment() {
        let a = resample_by_arclength(&shapes::clothoid(0.5, 1.0, 2.0, 512), 512).unwrap();
        let p = find_partition(&euclidean_signature(&a, 1).unwrap(), &Config::default()).unwrap();
        assert_eq!(p.witness_orders(), &[1]);
        assert_eq!(p.times().len(), 2);
        assert!((p.times()[1] - a.length()).abs() < 1e-12);
    }

    #[test]
    fn ellipse_needs_second_order_near_vertices() {
        let a = resample_by_arclength(&shapes::ellipse(2.0, 1.0, 2048), 2048).unwrap();
        let cfg = Config::default();
        assert!(find_partition(&euclidean_signature(&a, 1).unwrap(), &cfg).is_err());
        let p = find_partition(&euclidean_signature(&a, 2).unwrap(), &cfg).unwrap();
        assert!(p.witness_orders().contains(&1) && p.witness_orders().contains(&2));
        assert!(p.margins().iter().all(|&m| m > 0.0));
        assert!((p.times()[p.times().len() - 1] - a.length()).abs() < 1e-9);
    }

    #[test]
    fn circle_is_forbidden() {
        let a = resample_by_arclength(&shapes::circle(1.0, 512), 512).unwrap();
        let r = find_partition(&euclidean_signature(&a, 1).unwrap(), &Config::default());
        assert!(matches!(r, Err(SigError::ForbiddenPoint { .. })));
    }
}
