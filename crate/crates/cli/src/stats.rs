/// Summary of the best objective values reached on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub instance: String,
    pub runs: usize,
    pub best: i64,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); zero for a single run.
    pub stddev: f64,
}

impl Aggregate {
    /// Returns `None` for an empty slice.
    pub fn from_values(instance: impl Into<String>, values: &[i64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let runs = values.len();
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        let mean = values.iter().map(|&v| v as f64).sum::<f64>() / runs as f64;
        let median = if runs % 2 == 1 {
            sorted[runs / 2] as f64
        } else {
            (sorted[runs / 2 - 1] as f64 + sorted[runs / 2] as f64) / 2.0
        };
        let stddev = if runs > 1 {
            let ss: f64 = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum();
            (ss / (runs - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Self {
            instance: instance.into(),
            runs,
            best: *sorted.last().unwrap(),
            mean,
            median,
            stddev,
        })
    }
}
