//! Named group constructors and the descriptor grammar.
//!
//! Grammar: `NAME := FAMILY INT | FAMILY INT "x" NAME` with families
//! `S`, `A`, `D`, `Z` and the fixed name `Q8`. Direct products act on
//! the disjoint union of the factors' points.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::Group;
use crate::perm::Permutation;

/// Canonical generators for a catalogue descriptor.
pub fn generators(name: &str) -> Result<(usize, Vec<Permutation>)> {
    let name = name.trim();
    if name.is_empty() {
        return Err(Error::Parse("empty group descriptor".into()));
    }
    let mut degree = 0usize;
    let mut gens: Vec<Permutation> = Vec::new();
    for factor in name.split('x') {
        let (d, fg) = family_generators(factor.trim())?;
        // shift the factor onto its own block of points
        let pad = |p: &Permutation, total: usize, offset: usize| {
            let mut images: Vec<u16> = (0..total as u16).collect();
            for i in 0..p.degree() {
                images[offset + i] = (offset + p.image(i)) as u16;
            }
            Permutation::from_images(images).unwrap()
        };
        let total = degree + d;
        gens = gens
            .iter()
            .map(|g| pad(g, total, 0))
            .chain(fg.iter().map(|g| pad(g, total, degree)))
            .collect();
        degree = total;
    }
    Ok((degree, gens))
}

/// Build the full group for a catalogue descriptor.
pub fn build(name: &str, cap: usize) -> Result<Arc<Group>> {
    let (degree, gens) = generators(name)?;
    Group::closure_labeled(degree, &gens, cap, name.trim())
}

fn family_generators(factor: &str) -> Result<(usize, Vec<Permutation>)> {
    if factor == "Q8" {
        return Ok((8, q8_generators()));
    }
    let (family, num) = factor.split_at(1);
    let n: usize = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad group descriptor {:?}", factor)))?;
    if n == 0 {
        return Err(Error::Parse(format!("order parameter 0 in {:?}", factor)));
    }
    match family {
        "Z" => Ok((n, cyclic_generators(n))),
        "S" => Ok((n, symmetric_generators(n))),
        "A" => Ok((n, alternating_generators(n))),
        "D" => dihedral_generators(n),
        _ => Err(Error::Parse(format!("unknown family {:?}", factor))),
    }
}

fn cycle(degree: usize, points: &[usize]) -> Permutation {
    let mut images: Vec<u16> = (0..degree as u16).collect();
    for w in 0..points.len() {
        images[points[w]] = points[(w + 1) % points.len()] as u16;
    }
    Permutation::from_images(images).unwrap()
}

fn cyclic_generators(n: usize) -> Vec<Permutation> {
    if n == 1 {
        return vec![];
    }
    let pts: Vec<usize> = (0..n).collect();
    vec![cycle(n, &pts)]
}

fn symmetric_generators(n: usize) -> Vec<Permutation> {
    match n {
        1 => vec![],
        2 => vec![cycle(2, &[0, 1])],
        _ => {
            let pts: Vec<usize> = (0..n).collect();
            vec![cycle(n, &[0, 1]), cycle(n, &pts)]
        }
    }
}

fn alternating_generators(n: usize) -> Vec<Permutation> {
    match n {
        1 | 2 => vec![],
        3 => vec![cycle(3, &[0, 1, 2])],
        _ => {
            let big: Vec<usize> = if n % 2 == 1 {
                (0..n).collect()
            } else {
                (1..n).collect()
            };
            vec![cycle(n, &[0, 1, 2]), cycle(n, &big)]
        }
    }
}

fn dihedral_generators(n: usize) -> Result<(usize, Vec<Permutation>)> {
    match n {
        1 => Ok((2, vec![cycle(2, &[0, 1])])),
        // D2 is the Klein four-group; use its regular representation
        2 => Ok((
            4,
            vec![
                Permutation::parse("(0 1)(2 3)", 4).unwrap(),
                Permutation::parse("(0 2)(1 3)", 4).unwrap(),
            ],
        )),
        _ => {
            let rot: Vec<usize> = (0..n).collect();
            let mut refl: Vec<u16> = (0..n as u16).collect();
            for i in 0..n {
                refl[i] = ((n - i) % n) as u16;
            }
            Ok((
                n,
                vec![cycle(n, &rot), Permutation::from_images(refl).unwrap()],
            ))
        }
    }
}

/// Left-regular generators of the quaternion group on the basis
/// `1, -1, i, -i, j, -j, k, -k`.
fn q8_generators() -> Vec<Permutation> {
    let gen_i = Permutation::from_images(vec![2, 3, 1, 0, 6, 7, 5, 4]).unwrap();
    let gen_j = Permutation::from_images(vec![4, 5, 7, 6, 1, 0, 2, 3]).unwrap();
    vec![gen_i, gen_j]
}

/// The fixed corpus of groups run by the default verification sweep:
/// family-grammar groups of order at most 48, plus S4 and A5 spot checks.
pub const DEFAULT_CATALOGUE: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z9", "Z10", "Z12", "Z15", "Z16", "Z18",
    "Z20", "Z24", "Z30", "Z36", "Z48", "Z2xZ2", "Z2xZ4", "Z2xZ2xZ2", "Z3xZ3", "Z2xZ6", "Z4xZ4",
    "Z6xZ6", "D4", "D5", "D6", "D8", "D10", "D12", "Q8", "Q8xZ2", "S3", "S3xZ2", "S3xZ3", "S4",
    "A4", "A4xZ2", "A5",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_orders() {
        for (name, order) in [
            ("S4", 24),
            ("Z6", 6),
            ("Z1", 1),
            ("A5", 60),
            ("D6", 12),
            ("D2", 4),
            ("Z2xZ2", 4),
            ("S3xZ2", 12),
            ("Q8xZ2", 16),
        ] {
            let g = build(name, 10_000).unwrap();
            assert_eq!(g.order(), order, "{}", name);
            assert_eq!(g.label(), name);
        }
    }

    #[test]
    fn s4_generators_are_transposition_and_four_cycle() {
        let (_, gens) = generators("S4").unwrap();
        let strs: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
        assert_eq!(strs, vec!["(0 1)".to_string(), "(0 1 2 3)".to_string()]);
    }

    #[test]
    fn z6_generator_is_six_cycle() {
        let (_, gens) = generators("Z6").unwrap();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].to_string(), "(0 1 2 3 4 5)");
    }

    #[test]
    fn q8_has_order_eight_and_unique_involution() {
        let g = build("Q8", 100).unwrap();
        assert_eq!(g.order(), 8);
        let involutions = (0..8)
            .filter(|&i| i != 0 && g.prod(i, i) == 0)
            .count();
        assert_eq!(involutions, 1);
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(build("B3", 100).is_err());
        assert!(build("Q16", 100).is_err());
        assert!(build("Z", 100).is_err());
        assert!(build("", 100).is_err());
        assert!(build("Z0", 100).is_err());
    }

    #[test]
    fn default_catalogue_is_buildable() {
        for name in DEFAULT_CATALOGUE {
            let g = build(name, 10_000).unwrap();
            assert!(g.order() <= 60, "{} too big", name);
        }
    }
}
