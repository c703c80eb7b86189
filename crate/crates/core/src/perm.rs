//! Permutations on `{0, …, degree−1}` with cycle-notation parsing.

use crate::error::{Error, Result};

/// A permutation stored as its image table: point `i` maps to `images[i]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u16).collect(),
        }
    }

    /// Build from an image table, validating bijectivity.
    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            let i = img as usize;
            if i >= n || seen[i] {
                return Err(Error::Parse(format!(
                    "image table {:?} is not a bijection on 0..{}",
                    images, n
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    /// Function composition: `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u16; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img as usize] = i as u16;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img as usize)
    }

    /// Cycle decomposition, fixed points omitted; cycles start at their
    /// least point and are listed in increasing order of that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut p = self.image(start);
            while p != start {
                seen[p] = true;
                cyc.push(p);
                p = self.image(p);
            }
            out.push(cyc);
        }
        out
    }

    /// Multiset of cycle lengths, descending (fixed points omitted).
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Parse cycle notation like `"(0 1 2)(3 4)"`; the identity is `"()"`.
    ///
    /// Whitespace is insignificant and commas may separate points. Every
    /// point must be `< degree`.
    pub fn parse(input: &str, degree: usize) -> Result<Self> {
        if degree > u16::MAX as usize {
            return Err(Error::Parse(format!("degree {} too large", degree)));
        }
        let mut images: Vec<u16> = (0..degree as u16).collect();
        let mut chars = input.chars().peekable();
        let mut saw_cycle = false;
        loop {
            while matches!(chars.peek(), Some(c) if c.is_whitespace()) {
                chars.next();
            }
            match chars.next() {
                None => break,
                Some('(') => {}
                Some(c) => {
                    return Err(Error::Parse(format!(
                        "expected '(' in permutation {:?}, found {:?}",
                        input, c
                    )))
                }
            }
            saw_cycle = true;
            let mut cycle: Vec<usize> = Vec::new();
            let mut num = String::new();
            loop {
                match chars.next() {
                    Some(c) if c.is_ascii_digit() => num.push(c),
                    Some(c) if c.is_whitespace() || c == ',' => {
                        if !num.is_empty() {
                            cycle.push(parse_point(&num, degree, input)?);
                            num.clear();
                        }
                    }
                    Some(')') => {
                        if !num.is_empty() {
                            cycle.push(parse_point(&num, degree, input)?);
                        }
                        break;
                    }
                    Some(c) => {
                        return Err(Error::Parse(format!(
                            "unexpected {:?} in permutation {:?}",
                            c, input
                        )))
                    }
                    None => return Err(Error::Parse(format!("unclosed cycle in {:?}", input))),
                }
            }
            let mut in_cycle = std::collections::HashSet::new();
            for &p in &cycle {
                if !in_cycle.insert(p) {
                    return Err(Error::Parse(format!("repeated point {} in {:?}", p, input)));
                }
            }
            // juxtaposed cycles multiply left to right: earlier cycles act first
            if cycle.len() > 1 {
                let mut cyc_images: Vec<u16> = (0..degree as u16).collect();
                for w in 0..cycle.len() {
                    cyc_images[cycle[w]] = cycle[(w + 1) % cycle.len()] as u16;
                }
                let acc = Permutation { images };
                let cyc = Permutation { images: cyc_images };
                images = cyc.compose(&acc).images;
            }
        }
        if !saw_cycle {
            return Err(Error::Parse(format!("empty permutation literal {:?}", input)));
        }
        Permutation::from_images(images)
    }

    /// Parse a comma-separated list of permutations in cycle notation.
    pub fn parse_list(input: &str, degree: usize) -> Result<Vec<Permutation>> {
        let mut out = Vec::new();
        for part in split_top_level(input) {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            out.push(Permutation::parse(part, degree)?);
        }
        Ok(out)
    }

    /// Smallest degree that makes the cycle literal valid (max point + 1).
    pub fn scan_degree(input: &str) -> Result<usize> {
        let mut max_point: Option<usize> = None;
        let mut num = String::new();
        for c in input.chars() {
            if c.is_ascii_digit() {
                num.push(c);
            } else if !num.is_empty() {
                let p: usize = num
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {:?}", num)))?;
                max_point = Some(max_point.map_or(p, |m| m.max(p)));
                num.clear();
            }
        }
        if !num.is_empty() {
            let p: usize = num
                .parse()
                .map_err(|_| Error::Parse(format!("bad point {:?}", num)))?;
            max_point = Some(max_point.map_or(p, |m| m.max(p)));
        }
        Ok(max_point.map_or(1, |m| m + 1))
    }
}

fn parse_point(num: &str, degree: usize, input: &str) -> Result<usize> {
    let p: usize = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad point {:?} in {:?}", num, input)))?;
    if p >= degree {
        return Err(Error::Parse(format!(
            "point {} out of range for degree {} in {:?}",
            p, degree, input
        )));
    }
    Ok(p)
}

/// Split on commas that sit outside parentheses.
fn split_top_level(input: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in input.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&input[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&input[start..]);
    parts
}

impl std::fmt::Display for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cyc in cycles {
            write!(f, "(")?;
            for (i, p) in cyc.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip() {
        let p = Permutation::parse("(0 1 2)(3 4)", 5).unwrap();
        assert_eq!(p.image(0), 1);
        assert_eq!(p.image(2), 0);
        assert_eq!(p.image(3), 4);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        let id = Permutation::parse("()", 4).unwrap();
        assert!(id.is_identity());
        assert_eq!(id.to_string(), "()");
    }

    #[test]
    fn parse_is_whitespace_insensitive() {
        let a = Permutation::parse("(0 1 2)", 3).unwrap();
        let b = Permutation::parse("( 0   1,2 )", 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let a = Permutation::parse("(0 1)", 3).unwrap();
        let b = Permutation::parse("(1 2)", 3).unwrap();
        // (a ∘ b)(1) = a(b(1)) = a(2) = 2
        assert_eq!(a.compose(&b).image(1), 2);
        assert_eq!(b.compose(&a).image(1), 0);
    }

    #[test]
    fn inverse_undoes() {
        let p = Permutation::parse("(0 1 2 3)", 4).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
    }

    #[test]
    fn juxtaposed_cycles_multiply_left_to_right() {
        // (0 1)(1 2): apply (0 1) first, then (1 2) — standard left-to-right
        // cycle product convention: 0 -> 1 -> 2.
        let p = Permutation::parse("(0 1)(1 2)", 3).unwrap();
        assert_eq!(p.image(0), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::parse("(0 1", 3).is_err());
        assert!(Permutation::parse("(0 0)", 3).is_err());
        assert!(Permutation::parse("(0 5)", 3).is_err());
        assert!(Permutation::parse("0 1", 3).is_err());
    }

    #[test]
    fn parse_list_splits_on_top_level_commas() {
        let list = Permutation::parse_list("(0 1 2 3), (0 1)", 4).unwrap();
        assert_eq!(list.len(), 2);
        let one = Permutation::parse_list("(0 1)(2 3)", 4).unwrap();
        assert_eq!(one.len(), 1);
    }
}
