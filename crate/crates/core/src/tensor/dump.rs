//! Plain-text tensor dump for debugging and cross-implementation diffs.
//!
//! ```text
//! t <order> <dim>
//! <i1> … <im> <value>
//! ```
//!
//! One line per nonzero entry, 1-based indices in ascending lexicographic
//! order, values in shortest round-trip form.

use std::fmt::Write as _;

use super::{DenseTensor, TensorError};

impl DenseTensor {
    pub fn to_dump(&self) -> String {
        let mut out = format!("t {} {}\n", self.order(), self.dim());
        for (idx, v) in self.nonzeros() {
            for i in idx {
                let _ = write!(out, "{} ", i + 1);
            }
            let _ = writeln!(out, "{v:?}");
        }
        out
    }
}

pub fn parse_dump(text: &str) -> Result<DenseTensor, TensorError> {
    let bad = |line: usize, reason: String| TensorError::MalformedDump { line, reason };
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| bad(1, "empty input".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (order, dim) = match fields[..] {
        ["t", o, d] => (
            o.parse::<usize>()
                .map_err(|_| bad(1, format!("bad order `{o}`")))?,
            d.parse::<usize>()
                .map_err(|_| bad(1, format!("bad dimension `{d}`")))?,
        ),
        _ => return Err(bad(1, "expected `t <order> <dim>`".into())),
    };
    let mut t = DenseTensor::zeros(order, dim)?;
    for (i, line) in lines {
        let line_no = i + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != order + 1 {
            return Err(bad(line_no, format!("expected {} fields", order + 1)));
        }
        let mut idx = Vec::with_capacity(order);
        for f in &fields[..order] {
            match f.parse::<usize>() {
                Ok(v) if (1..=dim).contains(&v) => idx.push(v - 1),
                _ => return Err(bad(line_no, format!("bad index `{f}`"))),
            }
        }
        let value: f64 = fields[order]
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| bad(line_no, format!("bad value `{}`", fields[order])))?;
        t.set(&idx, value);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::parse_hypergraph;
    use crate::tensor::signless_laplacian_tensor;
    use proptest::prelude::*;

    #[test]
    fn triangle_signless_dump() {
        let g = parse_hypergraph("p hg 3 2\ne 1 2\ne 2 3\ne 1 3").unwrap();
        let dump = signless_laplacian_tensor(&g).unwrap().to_dump();
        assert_eq!(
            dump,
            "t 2 3\n1 1 2.0\n1 2 1.0\n1 3 1.0\n2 1 1.0\n2 2 2.0\n2 3 1.0\n3 1 1.0\n3 2 1.0\n3 3 2.0\n"
        );
    }

    #[test]
    fn sixth_prints_shortest_roundtrip() {
        let t = DenseTensor::from_vec(1, 2, vec![1.0 / 6.0, 0.0]).unwrap();
        assert_eq!(t.to_dump(), "t 1 2\n1 0.16666666666666666\n");
    }

    #[test]
    fn malformed_dumps() {
        assert!(parse_dump("").is_err());
        assert!(parse_dump("t 2").is_err());
        assert!(parse_dump("t 2 2\n1 3 1.0").is_err());
        assert!(parse_dump("t 2 2\n1 1").is_err());
        assert!(parse_dump("t 2 2\n1 1 inf").is_err());
    }

    proptest! {
        #[test]
        fn dump_roundtrip(order in 1usize..4, dim in 1usize..4, seed in any::<u64>()) {
            let mut rng = crate::hypergraph::SplitMix64::new(seed);
            let t = DenseTensor::from_fn(order, dim, |_| {
                if rng.next_f64() < 0.5 { 0.0 } else { (rng.next_f64() - 0.5) * 1e3 }
            }).unwrap();
            prop_assert_eq!(parse_dump(&t.to_dump()).unwrap(), t);
        }
    }
}
