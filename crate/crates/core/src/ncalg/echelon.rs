//! Sparse reduced row echelon form over the Gaussian rationals, with rows
//! keyed by their largest word.

use std::collections::BTreeMap;

use super::poly::Poly;
use super::word::Word;
use crate::scalar::Scalar;

/// Coefficients of a row as a combination of the inserted generators.
pub type Combination = BTreeMap<usize, Scalar>;

#[derive(Clone, Debug)]
struct Row {
    poly: Poly,
    combo: Combination,
}

/// Fully reduced, monic rows: no row mentions another row's pivot.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<Word, Row>,
    track: bool,
}

fn add_combo(acc: &mut Combination, other: &Combination, c: &Scalar) {
    for (g, d) in other {
        let e = acc.entry(*g).or_insert_with(Scalar::zero);
        *e += &(c * d);
        if e.is_zero() {
            acc.remove(g);
        }
    }
}

impl Echelon {
    /// With `track`, every row remembers which inserted generators it came
    /// from, so reductions can report an explicit linear combination.
    pub fn new(track: bool) -> Self {
        Echelon { rows: BTreeMap::new(), track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, w: &Word) -> bool {
        self.rows.contains_key(w)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Word> {
        self.rows.keys()
    }

    /// Returns `(r, combo)` with `p - r = Σ combo[g] · generator_g` and no
    /// pivot word in `r`.
    pub fn reduce(&self, p: &Poly) -> (Poly, Combination) {
        let mut r = p.clone();
        let mut combo = Combination::new();
        let hits: Vec<(Word, Scalar)> =
            p.terms().filter(|(w, _)| self.rows.contains_key(*w)).map(|(w, c)| (w.clone(), c.clone())).collect();
        for (w, c) in hits {
            let row = &self.rows[&w];
            r.add_scaled(&row.poly, &-&c);
            if self.track {
                add_combo(&mut combo, &row.combo, &c);
            }
        }
        (r, combo)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).0.is_zero()
    }

    /// Adds generator number `id`; returns whether the rank grew.
    pub fn insert(&mut self, p: &Poly, id: usize) -> bool {
        let (r, reduced_by) = self.reduce(p);
        let Some((pivot, lead)) = r.leading().map(|(w, c)| (w.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().expect("nonzero leading coefficient");
        let poly = r.scale(&inv);
        let mut combo = Combination::new();
        if self.track {
            combo.insert(id, Scalar::one());
            add_combo(&mut combo, &reduced_by, &-Scalar::one());
            combo = combo.into_iter().map(|(g, c)| (g, &c * &inv)).filter(|(_, c)| !c.is_zero()).collect();
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.poly.coeff(&pivot).cloned() {
                row.poly.add_scaled(&poly, &-&c);
                if self.track {
                    add_combo(&mut row.combo, &combo, &-&c);
                }
            }
        }
        self.rows.insert(pivot, Row { poly, combo });
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncalg::word::Generator;
    use proptest::prelude::*;

    fn w(i: usize) -> Word {
        Word::from(Generator::sphere(i).letter())
    }

    fn poly(coeffs: &[i64]) -> Poly {
        Poly::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (w(i), Scalar::from_int(c))))
    }

    #[test]
    fn rank_of_dependent_rows() {
        let mut e = Echelon::new(true);
        assert!(e.insert(&poly(&[1, 1, 0]), 0));
        assert!(e.insert(&poly(&[0, 1, 1]), 1));
        assert!(!e.insert(&poly(&[1, 2, 1]), 2));
        assert_eq!(e.rank(), 2);
        let target = poly(&[2, 3, 1]);
        let (r, combo) = e.reduce(&target);
        assert!(r.is_zero());
        // 2·g0 + 1·g1
        assert_eq!(combo.get(&0), Some(&Scalar::from_int(2)));
        assert_eq!(combo.get(&1), Some(&Scalar::from_int(1)));
    }

    proptest! {
        #[test]
        fn combination_reconstructs_difference(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 4), 1..6),
            target in prop::collection::vec(-3i64..4, 4),
        ) {
            let mut e = Echelon::new(true);
            let gens: Vec<Poly> = rows.iter().map(|r| poly(r)).collect();
            for (k, g) in gens.iter().enumerate() {
                e.insert(g, k);
            }
            let p = poly(&target);
            let (r, combo) = e.reduce(&p);
            let mut rebuilt = r.clone();
            for (g, c) in &combo {
                rebuilt.add_scaled(&gens[*g], c);
            }
            prop_assert_eq!(rebuilt, p);
            prop_assert!(r.words().all(|w| !e.is_pivot(w)));
        }
    }
}
