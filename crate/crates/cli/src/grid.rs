//! Grid syntax: `log:<start>:<stop>:<n>`, `lin:<start>:<stop>:<n>`, or a
//! comma-separated list of numbers.

/// Strictly increasing finite reals, with the text they were parsed from.
#[derive(Debug, Clone, PartialEq)]
pub struct RealGrid {
    pub text: String,
    pub points: Vec<f64>,
}

/// Strictly increasing sample sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct MGrid {
    pub text: String,
    pub points: Vec<u64>,
}

fn spaced(text: &str, body: &str, log: bool) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = body.split(':').collect();
    let [start, stop, n] = parts[..] else {
        return Err(format!("'{text}': expected <start>:<stop>:<n>"));
    };
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| format!("'{text}': '{s}' is not a number"))
    };
    let (start, stop) = (num(start)?, num(stop)?);
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("'{text}': point count must be a positive integer"))?;
    if n == 0 {
        return Err(format!("'{text}': point count must be positive"));
    }
    if n > 1 && stop.partial_cmp(&start) != Some(std::cmp::Ordering::Greater) {
        return Err(format!("'{text}': stop must exceed start"));
    }
    if log && start.is_nan() || log && start <= 0.0 {
        return Err(format!("'{text}': log grids need a positive start"));
    }
    if n == 1 {
        return Ok(vec![start]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let u = i as f64 / last;
            match (log, i) {
                (_, 0) => start,
                (_, i) if i == n - 1 => stop,
                (true, _) => (start.ln() + u * (stop.ln() - start.ln())).exp(),
                (false, _) => start + u * (stop - start),
            }
        })
        .collect())
}

pub fn parse_real_grid(text: &str) -> Result<RealGrid, String> {
    let points = if let Some(body) = text.strip_prefix("log:") {
        spaced(text, body, true)?
    } else if let Some(body) = text.strip_prefix("lin:") {
        spaced(text, body, false)?
    } else {
        text.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("'{text}': '{s}' is not a number"))
            })
            .collect::<Result<_, _>>()?
    };
    if points.iter().any(|x| !x.is_finite()) {
        return Err(format!("'{text}': grid points must be finite"));
    }
    if points.windows(2).any(|w| w[1] <= w[0]) {
        return Err(format!("'{text}': grid must be strictly increasing"));
    }
    Ok(RealGrid {
        text: text.to_string(),
        points,
    })
}

/// Parses a real grid and rounds it to unique nonnegative integers.
pub fn parse_m_grid(text: &str) -> Result<MGrid, String> {
    let real = parse_real_grid(text)?;
    if real.points.iter().any(|&x| !(0.0..=1e15).contains(&x)) {
        return Err(format!("'{text}': sample sizes must lie in [0, 1e15]"));
    }
    let mut points: Vec<u64> = real.points.iter().map(|x| x.round() as u64).collect();
    points.dedup();
    Ok(MGrid {
        text: text.to_string(),
        points,
    })
}
