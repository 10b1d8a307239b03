use std::collections::BTreeMap;

use super::Group;

/// A subgroup as a sorted element list together with a generating set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub generators: Vec<usize>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct StructuralInvariants {
    pub order: usize,
    pub center: Subgroup,
    pub derived: Subgroup,
    /// `G = γ_1 ⊇ γ_2 ⊇ …`, ending at the trivial group or where it stabilizes.
    pub lower_central_series: Vec<Subgroup>,
    /// `None` when the series stalls above the trivial group.
    pub nilpotency_class: Option<usize>,
    /// element order ↦ number of elements of that order
    pub element_orders: BTreeMap<usize, usize>,
}

impl Group {
    pub fn subgroup(&self, gens: &[usize]) -> Subgroup {
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut elements = self.closure(&gens);
        elements.sort_unstable();
        Subgroup { elements, generators: gens }
    }

    /// The smallest normal subgroup containing `gens`.
    pub fn normal_closure(&self, gens: &[usize]) -> Subgroup {
        let mut list: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let mut member = vec![false; self.order()];
        for x in self.closure(&list) {
            member[x] = true;
        }
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in self.generators() {
                let c = self.conj(x, g);
                if !member[c] {
                    list.push(c);
                    for y in self.closure(&list) {
                        member[y] = true;
                    }
                }
            }
            i += 1;
        }
        self.subgroup(&list)
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let elements: Vec<usize> = (0..self.order())
            .filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        let generators = generating_subset(self, &elements);
        Subgroup { elements, generators }
    }

    /// `[H, G]` for a normal subgroup `H`.
    pub fn commutator_with_group(&self, h: &Subgroup) -> Subgroup {
        let comms: Vec<usize> = h
            .generators
            .iter()
            .flat_map(|&x| self.generators().iter().map(move |&g| (x, g)))
            .map(|(x, g)| self.commutator(x, g))
            .collect();
        self.normal_closure(&comms)
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let whole = Subgroup { elements: (0..self.order()).collect(), generators: self.generators().to_vec() };
        self.commutator_with_group(&whole)
    }

    pub fn lower_central_series(&self) -> (Vec<Subgroup>, Option<usize>) {
        let mut series = vec![Subgroup { elements: (0..self.order()).collect(), generators: self.generators().to_vec() }];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                let class = series.len() - 1;
                return (series, Some(class));
            }
            let next = self.commutator_with_group(last);
            if next.order() == last.order() {
                return (series, None);
            }
            series.push(next);
        }
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        self.lower_central_series().1
    }

    pub fn element_order_histogram(&self) -> BTreeMap<usize, usize> {
        let mut hist = BTreeMap::new();
        for x in 0..self.order() {
            *hist.entry(self.element_order(x)).or_insert(0) += 1;
        }
        hist
    }

    pub fn structural_invariants(&self) -> StructuralInvariants {
        let (series, class) = self.lower_central_series();
        let derived = series.get(1).cloned().unwrap_or_else(|| self.subgroup(&[]));
        StructuralInvariants {
            order: self.order(),
            center: self.center(),
            derived,
            lower_central_series: series,
            nilpotency_class: class,
            element_orders: self.element_order_histogram(),
        }
    }

    /// `Some(p)` when the order is a power of the prime `p` (order > 1).
    pub fn prime_of_p_group(&self) -> Option<u64> {
        crate::zmod::prime_power(self.order() as u64).map(|(p, _)| p)
    }
}

/// A generating set of the subgroup with the given elements, chosen greedily.
fn generating_subset(g: &Group, elements: &[usize]) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut size = 1;
    for &x in elements {
        if size == elements.len() {
            break;
        }
        if !member[x] {
            gens.push(x);
            let span = g.closure(&gens);
            size = span.len();
            for y in span {
                member[y] = true;
            }
        }
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_center(g: &Group) -> Vec<usize> {
        (0..g.order()).filter(|&z| (0..g.order()).all(|x| g.mul(z, x) == g.mul(x, z))).collect()
    }

    #[test]
    fn heisenberg_invariants() {
        let g = Group::heisenberg(5).unwrap();
        let inv = g.structural_invariants();
        assert_eq!(inv.nilpotency_class, Some(2));
        assert_eq!(inv.center.elements, brute_center(&g));
        assert_eq!(inv.center.order(), 5);
        assert_eq!(inv.derived.elements, inv.center.elements);
        assert!(inv.center.contains(25));
    }

    #[test]
    fn cyclic_and_dihedral() {
        let c6 = Group::cyclic(6).unwrap();
        assert_eq!(c6.nilpotency_class(), Some(1));
        assert!(c6.derived_subgroup().is_trivial());
        let d8 = Group::dihedral(8).unwrap();
        assert_eq!(d8.derived_subgroup().elements, vec![0, 2]);
        assert_eq!(d8.nilpotency_class(), Some(2));
        assert_eq!(d8.center().elements, brute_center(&d8));
    }

    #[test]
    fn non_nilpotent_group_has_no_class() {
        let s3 = Group::symmetric(3).unwrap();
        assert_eq!(s3.nilpotency_class(), None);
        assert_eq!(s3.derived_subgroup().order(), 3);
    }

    #[test]
    fn orders_histogram() {
        let q8 = Group::quaternion(8).unwrap();
        let h = q8.element_order_histogram();
        assert_eq!(h.get(&4), Some(&6));
        assert_eq!(h.get(&2), Some(&1));
    }
}
