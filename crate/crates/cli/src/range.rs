//! `start:stop:step` ranges (stop exclusive) and comma lists.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeError(pub String);

impl fmt::Display for RangeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for RangeError {}

/// Values of at most this many are produced.
pub const MAX_RANGE_LEN: usize = 1 << 20;

fn num(s: &str, what: &str) -> Result<usize, RangeError> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(RangeError(format!(
            "{what} must be a nonnegative integer, got {s:?}"
        )));
    }
    s.parse()
        .map_err(|_| RangeError(format!("{what} {s:?} is too large")))
}

/// Parses `n`, `start:stop` or `start:stop:step`. The result is never
/// empty.
pub fn parse_range(s: &str) -> Result<Vec<usize>, RangeError> {
    let parts: Vec<&str> = s.split(':').collect();
    let (start, stop, step) = match parts.as_slice() {
        [n] => {
            let n = num(n, "value")?;
            return Ok(vec![n]);
        }
        [a, b] => (num(a, "start")?, num(b, "stop")?, 1),
        [a, b, c] => (num(a, "start")?, num(b, "stop")?, num(c, "step")?),
        _ => return Err(RangeError(format!("expected start:stop:step, got {s:?}"))),
    };
    if step == 0 {
        return Err(RangeError("step must be positive".into()));
    }
    if start >= stop {
        return Err(RangeError(format!("empty range {s:?}: stop is exclusive")));
    }
    let len = (stop - start).div_ceil(step);
    if len > MAX_RANGE_LEN {
        return Err(RangeError(format!(
            "range {s:?} has more than {MAX_RANGE_LEN} values"
        )));
    }
    Ok((start..stop).step_by(step).collect())
}

/// Comma-separated floats.
pub fn parse_float_list(s: &str) -> Result<Vec<f64>, RangeError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| RangeError(format!("bad number {p:?}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("10:130:10").unwrap().len(), 12);
        assert_eq!(parse_range("10:130:10").unwrap().last(), Some(&120));
        assert_eq!(parse_range("3:6").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_range("7").unwrap(), vec![7]);
        assert_eq!(parse_range("0:10:4").unwrap(), vec![0, 4, 8]);
        for bad in [
            "",
            "a",
            "1:2:0",
            "5:5",
            "6:5",
            "1:2:3:4",
            "-1:3",
            "1::2",
            "0:99999999999:1",
        ] {
            assert!(parse_range(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn float_lists() {
        assert_eq!(parse_float_list("0.6, 0.8,1").unwrap(), vec![0.6, 0.8, 1.0]);
        assert!(parse_float_list("0.6,,1").is_err());
        assert!(parse_float_list("nan").is_err());
    }
}
