//! Small deterministic statistics used by the experiment summaries.

/// Median; averages the middle pair for even lengths.
pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v: Vec<f64> = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    })
}

/// Ranks with average ties, 1-based.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            out[idx[k]] = avg;
        }
        i = j + 1;
    }
    out
}

fn pearson(a: &[f64], b: &[f64]) -> Option<f64> {
    let n = a.len();
    if n < 2 {
        return None;
    }
    let ma = a.iter().sum::<f64>() / n as f64;
    let mb = b.iter().sum::<f64>() / n as f64;
    let mut num = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for i in 0..n {
        let da = a[i] - ma;
        let db = b[i] - mb;
        num += da * db;
        va += da * da;
        vb += db * db;
    }
    if va == 0.0 || vb == 0.0 {
        return None;
    }
    Some(num / (va * vb).sqrt())
}

/// Spearman rank correlation with average-tie ranks; None when fewer than
/// two pairs or either margin is constant.
pub fn spearman(pairs: &[(f64, f64)]) -> Option<f64> {
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    pearson(&ranks(&xs), &ranks(&ys))
}

/// Coefficient of variation (population standard deviation over mean);
/// None for fewer than two values or zero mean.
pub fn coefficient_of_variation(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return None;
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Some(var.sqrt() / mean.abs())
}

/// The first `⌈len/3⌉` and last `⌈len/3⌉` elements.
pub fn thirds<T>(xs: &[T]) -> (&[T], &[T]) {
    let k = xs.len().div_ceil(3).max(1).min(xs.len());
    (&xs[..k], &xs[xs.len() - k..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_small() {
        assert_eq!(median(&[]), None);
        assert_eq!(median(&[3.0]), Some(3.0));
        assert_eq!(median(&[1.0, 2.0, 3.0]), Some(2.0));
        assert_eq!(median(&[1.0, 2.0, 3.0, 10.0]), Some(2.5));
    }

    #[test]
    fn spearman_monotone_sequences() {
        let inc: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, (i * i) as f64)).collect();
        assert!((spearman(&inc).unwrap() - 1.0).abs() < 1e-12);
        let dec: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, -(i as f64).exp())).collect();
        assert!((spearman(&dec).unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(spearman(&[(1.0, 2.0)]), None);
        assert_eq!(spearman(&[(1.0, 2.0), (2.0, 2.0)]), None); // constant margin
    }

    #[test]
    fn spearman_with_ties_is_symmetricish() {
        let pairs = [(1.0, 5.0), (2.0, 5.0), (3.0, 1.0), (4.0, 0.0)];
        let r = spearman(&pairs).unwrap();
        assert!(r < 0.0);
        let flipped: Vec<(f64, f64)> = pairs.iter().map(|&(a, b)| (a, -b)).collect();
        assert!((spearman(&flipped).unwrap() + r).abs() < 1e-12);
    }

    #[test]
    fn cv_basics() {
        assert_eq!(coefficient_of_variation(&[1.0]), None);
        let c = coefficient_of_variation(&[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(c, 0.0);
        let c = coefficient_of_variation(&[1.0, 3.0]).unwrap();
        assert!((c - 0.5).abs() < 1e-12);
    }

    #[test]
    fn thirds_split() {
        let v: Vec<i32> = (0..9).collect();
        let (a, b) = thirds(&v);
        assert_eq!(a, &[0, 1, 2]);
        assert_eq!(b, &[6, 7, 8]);
        let v: Vec<i32> = (0..4).collect();
        let (a, b) = thirds(&v);
        assert_eq!(a, &[0, 1]);
        assert_eq!(b, &[2, 3]);
        let v = [1];
        let (a, b) = thirds(&v);
        assert_eq!(a, b);
    }
}
