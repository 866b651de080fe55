//! Plain-text point files: one `x y` pair per line, `#` starts a comment.

use lmbdg::geom::Point;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PointFileError {
    #[error("line {0}: expected two numbers")]
    Arity(usize),
    #[error("line {0}: {1:?} is not a finite number")]
    Number(usize, String),
}

pub fn parse_points(text: &str) -> Result<Vec<Point>, PointFileError> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [x, y] = fields.as_slice() else {
            return Err(PointFileError::Arity(k + 1));
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| PointFileError::Number(k + 1, s.to_string()))
        };
        out.push(Point::new(num(x)?, num(y)?, out.len()));
    }
    Ok(out)
}

/// Decimal notation that parses back to the same values.
pub fn write_points(points: &[Point], header: &str) -> String {
    let mut s = String::new();
    for line in header.lines() {
        s.push_str("# ");
        s.push_str(line);
        s.push('\n');
    }
    for p in points {
        s.push_str(&format!("{} {}\n", p.x, p.y));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let pts = vec![Point::new(0.1, -2.5, 0), Point::new(1e-7, 3e12, 1)];
        let text = write_points(&pts, "two points");
        assert!(!text.contains('e'));
        assert_eq!(parse_points(&text).unwrap(), pts);
    }

    #[test]
    fn comments_and_errors() {
        let pts = parse_points("# head\n\n1 2 # trailing\n  3.5\t4\n").unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[1].id, 1);
        assert_eq!(parse_points("1 2 3\n"), Err(PointFileError::Arity(1)));
        assert_eq!(parse_points("1\n"), Err(PointFileError::Arity(1)));
        assert!(matches!(
            parse_points("1 nan\n"),
            Err(PointFileError::Number(1, _))
        ));
    }
}
