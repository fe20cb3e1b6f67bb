//! The `wafom-net v1` text format.
//!
//! ```text
//! wafom-net v1
//! n=<n> S=<S> d=<d>
//! <S binary strings of length n>   (d lines, one basis vector each)
//! ```

use std::fmt::Write as _;

use super::{parse_bit_string, LinearNet, NetPoint, MAX_DIGITS};
use crate::error::{Error, Result};

pub const NET_FILE_HEADER: &str = "wafom-net v1";

pub fn write_net(net: &LinearNet) -> String {
    let mut out = String::new();
    writeln!(out, "{NET_FILE_HEADER}").unwrap();
    writeln!(out, "n={} S={} d={}", net.n(), net.s(), net.dim()).unwrap();
    for b in net.basis() {
        let line: Vec<String> = b
            .rows()
            .iter()
            .map(|r| format!("{:0width$b}", r, width = net.n()))
            .collect();
        writeln!(out, "{}", line.join(" ")).unwrap();
    }
    out
}

/// Parses `key=value` fields of a shape line such as `n=30 S=4 d=10`.
pub(crate) fn parse_shape_line(line: &str, lineno: usize, keys: &[&str]) -> Result<Vec<usize>> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() != keys.len() {
        return Err(Error::parse(lineno, format!("expected fields {keys:?}")));
    }
    fields
        .iter()
        .zip(keys)
        .map(|(f, k)| {
            let v = f
                .strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| {
                    Error::parse(lineno, format!("expected '{k}=<value>', got '{f}'"))
                })?;
            v.parse()
                .map_err(|_| Error::parse(lineno, format!("'{v}' is not a nonnegative integer")))
        })
        .collect()
}

pub(crate) fn parse_bit_field(field: &str, n: usize, lineno: usize) -> Result<u64> {
    if field.len() != n {
        return Err(Error::parse(
            lineno,
            format!("'{field}' has length {}, expected {n}", field.len()),
        ));
    }
    parse_bit_string(field)
        .ok_or_else(|| Error::parse(lineno, format!("'{field}' is not a binary string")))
}

pub fn parse_net(text: &str) -> Result<LinearNet> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    if header.trim_end() != NET_FILE_HEADER {
        return Err(Error::parse(
            1,
            format!("expected header '{NET_FILE_HEADER}'"),
        ));
    }
    let (ln, shape) = lines
        .next()
        .ok_or_else(|| Error::parse(2, "missing shape line"))?;
    let v = parse_shape_line(shape, ln, &["n", "S", "d"])?;
    let (n, s, d) = (v[0], v[1], v[2]);
    if n == 0 || n > MAX_DIGITS || s == 0 {
        return Err(Error::parse(ln, format!("unsupported shape n={n} S={s}")));
    }
    if d > n * s {
        return Err(Error::parse(ln, format!("d={d} exceeds nS={}", n * s)));
    }
    let mut basis = Vec::with_capacity(d);
    for (ln, line) in lines.by_ref() {
        if basis.len() == d {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(ln, format!("more than d={d} basis lines")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != s {
            return Err(Error::parse(
                ln,
                format!("expected {s} rows, found {}", fields.len()),
            ));
        }
        let rows = fields
            .iter()
            .map(|f| parse_bit_field(f, n, ln))
            .collect::<Result<Vec<_>>>()?;
        basis.push(NetPoint::from_rows(n, rows)?);
    }
    if basis.len() != d {
        return Err(Error::parse(
            text.lines().count() + 1,
            format!("expected {d} basis lines, found {}", basis.len()),
        ));
    }
    LinearNet::new(n, s, basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let net = LinearNet::new(
            3,
            2,
            vec![
                NetPoint::from_bit_strings(&["101", "011"]).unwrap(),
                NetPoint::from_bit_strings(&["010", "000"]).unwrap(),
            ],
        )
        .unwrap();
        let text = write_net(&net);
        assert_eq!(text, "wafom-net v1\nn=3 S=2 d=2\n101 011\n010 000\n");
        assert_eq!(parse_net(&text).unwrap(), net);
    }

    #[test]
    fn rejects_malformed() {
        let bad = [
            "",
            "wafom-net v2\nn=2 S=1 d=1\n11\n",
            "wafom-net v1\nn=2 S=1\n11\n",
            "wafom-net v1\nn=2 S=1 d=2\n11\n",
            "wafom-net v1\nn=2 S=1 d=1\n11\n10\n",
            "wafom-net v1\nn=2 S=1 d=1\n12\n",
            "wafom-net v1\nn=2 S=1 d=1\n110\n",
            "wafom-net v1\nn=2 S=2 d=1\n11\n",
            "wafom-net v1\nn=2 S=1 d=3\n11\n10\n01\n",
        ];
        for text in bad {
            assert!(
                matches!(parse_net(text), Err(Error::Parse { .. })),
                "{text:?}"
            );
        }
    }

    #[test]
    fn rejects_dependent_basis() {
        let text = "wafom-net v1\nn=2 S=1 d=2\n11\n11\n";
        assert!(matches!(
            parse_net(text),
            Err(Error::Rank {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn full_and_empty_nets() {
        let text = "wafom-net v1\nn=2 S=1 d=0\n";
        assert_eq!(parse_net(text).unwrap().dim(), 0);
        let full = LinearNet::full(2, 1).unwrap();
        assert_eq!(parse_net(&write_net(&full)).unwrap(), full);
    }
}
