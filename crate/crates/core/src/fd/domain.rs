use std::fmt;

/// Finite set of integers stored as sorted, disjoint, non-adjacent closed
/// intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    iv: Vec<(i64, i64)>,
}

impl Domain {
    pub fn range(lo: i64, hi: i64) -> Domain {
        if lo > hi {
            Domain::empty()
        } else {
            Domain { iv: vec![(lo, hi)] }
        }
    }

    pub fn empty() -> Domain {
        Domain { iv: Vec::new() }
    }

    pub fn singleton(v: i64) -> Domain {
        Domain::range(v, v)
    }

    pub fn from_values(values: impl IntoIterator<Item = i64>) -> Domain {
        let mut vals: Vec<i64> = values.into_iter().collect();
        vals.sort_unstable();
        vals.dedup();
        let mut iv: Vec<(i64, i64)> = Vec::new();
        for v in vals {
            match iv.last_mut() {
                Some(last) if last.1.checked_add(1) == Some(v) => last.1 = v,
                _ => iv.push((v, v)),
            }
        }
        Domain { iv }
    }

    pub fn is_empty(&self) -> bool {
        self.iv.is_empty()
    }

    pub fn min(&self) -> i64 {
        self.iv.first().expect("empty domain").0
    }

    pub fn max(&self) -> i64 {
        self.iv.last().expect("empty domain").1
    }

    pub fn size(&self) -> u64 {
        self.iv
            .iter()
            .map(|&(l, h)| (h as i128 - l as i128 + 1) as u64)
            .fold(0u64, u64::saturating_add)
    }

    pub fn is_fixed(&self) -> bool {
        self.iv.len() == 1 && self.iv[0].0 == self.iv[0].1
    }

    pub fn value(&self) -> Option<i64> {
        self.is_fixed().then(|| self.iv[0].0)
    }

    pub fn contains(&self, v: i64) -> bool {
        let i = self.iv.partition_point(|&(_, h)| h < v);
        i < self.iv.len() && self.iv[i].0 <= v
    }

    pub fn intervals(&self) -> &[(i64, i64)] {
        &self.iv
    }

    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.iv.iter().flat_map(|&(l, h)| l..=h)
    }

    /// Keep only values in `lo..=hi`. Returns whether anything changed.
    pub fn restrict(&mut self, lo: i64, hi: i64) -> bool {
        let before = self.iv.len();
        let (first, last) = match (self.iv.first(), self.iv.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return false,
        };
        if lo <= first.0 && hi >= last.1 {
            return false;
        }
        let mut out = Vec::with_capacity(before);
        for &(l, h) in &self.iv {
            let (l2, h2) = (l.max(lo), h.min(hi));
            if l2 <= h2 {
                out.push((l2, h2));
            }
        }
        self.iv = out;
        true
    }

    /// Remove every value in `lo..=hi`.
    pub fn remove_range(&mut self, lo: i64, hi: i64) -> bool {
        if lo > hi || self.iv.is_empty() || hi < self.min() || lo > self.max() {
            return false;
        }
        let mut out = Vec::with_capacity(self.iv.len() + 1);
        let mut changed = false;
        for &(l, h) in &self.iv {
            if h < lo || l > hi {
                out.push((l, h));
                continue;
            }
            changed = true;
            if l < lo {
                out.push((l, lo - 1));
            }
            if h > hi {
                out.push((hi + 1, h));
            }
        }
        self.iv = out;
        changed
    }

    pub fn remove(&mut self, v: i64) -> bool {
        self.remove_range(v, v)
    }

    pub fn intersect(&mut self, other: &Domain) -> bool {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.iv.len() && j < other.iv.len() {
            let (a, b) = (self.iv[i], other.iv[j]);
            let (l, h) = (a.0.max(b.0), a.1.min(b.1));
            if l <= h {
                out.push((l, h));
            }
            if a.1 < b.1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        let changed = out != self.iv;
        self.iv = out;
        changed
    }

    /// Keep only the values accepted by `keep`. Intended for small domains.
    pub fn retain(&mut self, mut keep: impl FnMut(i64) -> bool) -> bool {
        let next = Domain::from_values(self.values().filter(|&v| keep(v)));
        let changed = next != *self;
        *self = next;
        changed
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iv
            .iter()
            .map(|&(l, h)| {
                if l == h {
                    l.to_string()
                } else {
                    format!("{l}..{h}")
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn restrict_and_remove() {
        let mut d = Domain::range(0, 23);
        assert!(d.restrict(12, 100));
        assert_eq!((d.min(), d.max(), d.size()), (12, 23, 12));
        assert!(d.remove(15));
        assert_eq!(d.intervals(), &[(12, 14), (16, 23)]);
        assert!(!d.contains(15));
        assert!(d.contains(16));
        assert!(!d.remove(15));
    }

    #[test]
    fn fixed_and_empty() {
        let mut d = Domain::range(5, 5);
        assert_eq!(d.value(), Some(5));
        d.remove(5);
        assert!(d.is_empty());
    }

    proptest! {
        #[test]
        fn operations_match_value_sets(
            vals in proptest::collection::btree_set(-20i64..20, 0..15),
            other in proptest::collection::btree_set(-20i64..20, 0..15),
            lo in -25i64..25, hi in -25i64..25,
        ) {
            let d = Domain::from_values(vals.iter().copied());
            prop_assert_eq!(d.values().collect::<Vec<_>>(), vals.iter().copied().collect::<Vec<_>>());
            prop_assert_eq!(d.size(), vals.len() as u64);

            let mut r = d.clone();
            r.restrict(lo, hi);
            let want: Vec<i64> = vals.iter().copied().filter(|v| (lo..=hi).contains(v)).collect();
            prop_assert_eq!(r.values().collect::<Vec<_>>(), want);

            let mut r = d.clone();
            r.remove_range(lo, hi);
            let want: Vec<i64> = vals.iter().copied().filter(|v| !(lo..=hi).contains(v)).collect();
            prop_assert_eq!(r.values().collect::<Vec<_>>(), want);

            let mut r = d.clone();
            r.intersect(&Domain::from_values(other.iter().copied()));
            let want: Vec<i64> = vals.intersection(&other).copied().collect();
            prop_assert_eq!(r.values().collect::<Vec<_>>(), want);
        }
    }
}
