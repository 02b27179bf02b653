//! Congruence closure and quotient quandles.

use super::{displacement_group, FiniteQuandle, QuandleError};

/// Seed rule for [`congruence_quotient`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CongruenceMode {
    /// `x ~ (x ▷ y) ▷ y`
    Involutory,
    /// `x ~ d(x)` for every displacement `d` with a fixed point, repeated until semiregular
    Semiregular,
    Seeds(Vec<(usize, usize)>),
}

/// A partition of the elements, classes numbered by least element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuandleCongruence {
    pub class_of: Vec<usize>,
    pub classes: usize,
}

impl QuandleCongruence {
    pub fn identity(n: usize) -> Self {
        Self {
            class_of: (0..n).collect(),
            classes: n,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.classes == self.class_of.len()
    }

    /// `x ~ x'`, `y ~ y'` implies `x ▷ y ~ x' ▷ y'`.
    pub fn is_compatible(&self, q: &FiniteQuandle) -> bool {
        let n = q.size();
        let mut rep = vec![usize::MAX; self.classes];
        for x in 0..n {
            if rep[self.class_of[x]] == usize::MAX {
                rep[self.class_of[x]] = x;
            }
        }
        (0..n).all(|x| {
            (0..n).all(|y| {
                self.class_of[q.op(x, y)]
                    == self.class_of[q.op(rep[self.class_of[x]], rep[self.class_of[y]])]
            })
        })
    }
}

fn find(p: &mut [usize], mut x: usize) -> usize {
    while p[x] != x {
        p[x] = p[p[x]];
        x = p[x];
    }
    x
}

/// Smallest congruence containing the seed pairs.
pub fn congruence_closure(q: &FiniteQuandle, seeds: &[(usize, usize)]) -> QuandleCongruence {
    let n = q.size();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut queue: Vec<(usize, usize)> = Vec::new();
    let union = |parent: &mut Vec<usize>, queue: &mut Vec<(usize, usize)>, a: usize, b: usize| {
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
            queue.push((a, b));
        }
    };
    for &(a, b) in seeds {
        union(&mut parent, &mut queue, a, b);
    }
    while let Some((a, b)) = queue.pop() {
        for z in 0..n {
            union(&mut parent, &mut queue, q.op(a, z), q.op(b, z));
            union(&mut parent, &mut queue, q.op(z, a), q.op(z, b));
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut root_class = vec![usize::MAX; n];
    let mut classes = 0;
    for x in 0..n {
        let r = find(&mut parent, x);
        if root_class[r] == usize::MAX {
            root_class[r] = classes;
            classes += 1;
        }
        class_of[x] = root_class[r];
    }
    QuandleCongruence { class_of, classes }
}

/// The quotient table on classes.
pub fn quotient(q: &FiniteQuandle, c: &QuandleCongruence) -> FiniteQuandle {
    let k = c.classes;
    let mut rep = vec![usize::MAX; k];
    for (x, &cl) in c.class_of.iter().enumerate() {
        if rep[cl] == usize::MAX {
            rep[cl] = x;
        }
    }
    FiniteQuandle::from_fn(k, |a, b| c.class_of[q.op(rep[a], rep[b])])
        .expect("quotient of a quandle by a congruence")
}

pub fn congruence_quotient(
    q: &FiniteQuandle,
    mode: &CongruenceMode,
    cap: u64,
) -> Result<(QuandleCongruence, FiniteQuandle), QuandleError> {
    let n = q.size();
    match mode {
        CongruenceMode::Seeds(seeds) => {
            let c = congruence_closure(q, seeds);
            let qq = quotient(q, &c);
            Ok((c, qq))
        }
        CongruenceMode::Involutory => {
            let seeds: Vec<(usize, usize)> = (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .map(|(x, y)| (x, q.op(q.op(x, y), y)))
                .collect();
            let c = congruence_closure(q, &seeds);
            let qq = quotient(q, &c);
            Ok((c, qq))
        }
        CongruenceMode::Semiregular => {
            let mut total = QuandleCongruence::identity(n);
            let mut cur = q.clone();
            loop {
                let dis = displacement_group(&cur, cap)?;
                let mut seeds = Vec::new();
                for k in 0..dis.order() {
                    if !dis.is_identity(k) && dis.has_fixed_point(k) {
                        seeds.extend(
                            dis.perms()[k]
                                .iter()
                                .enumerate()
                                .map(|(x, &y)| (x, y as usize)),
                        );
                    }
                }
                if seeds.is_empty() {
                    return Ok((total, cur));
                }
                let c = congruence_closure(&cur, &seeds);
                cur = quotient(&cur, &c);
                total = QuandleCongruence {
                    class_of: total.class_of.iter().map(|&x| c.class_of[x]).collect(),
                    classes: c.classes,
                };
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::DEFAULT_DIS_CAP;

    #[test]
    fn dihedral_is_already_involutory() {
        let q = FiniteQuandle::dihedral(3);
        let (c, qq) =
            congruence_quotient(&q, &CongruenceMode::Involutory, DEFAULT_DIS_CAP).unwrap();
        assert!(c.is_identity());
        assert_eq!(qq, q);
    }

    #[test]
    fn affine_five_collapses() {
        let q = FiniteQuandle::affine_cyclic(5, 2).unwrap();
        let (c, qq) =
            congruence_quotient(&q, &CongruenceMode::Involutory, DEFAULT_DIS_CAP).unwrap();
        assert_eq!(c.classes, 1);
        assert_eq!(qq.size(), 1);
    }

    #[test]
    fn semiregular_fixed() {
        let q = FiniteQuandle::affine_cyclic(9, 4).unwrap();
        let (c, _) =
            congruence_quotient(&q, &CongruenceMode::Semiregular, DEFAULT_DIS_CAP).unwrap();
        assert!(c.is_identity());
    }

    #[test]
    fn seeded_closure_is_compatible() {
        let q = FiniteQuandle::affine_cyclic(12, 5).unwrap();
        let c = congruence_closure(&q, &[(0, 4)]);
        assert!(c.is_compatible(&q));
        assert_eq!(c.classes, 4);
    }
}
