//! Finitely generated subgroups at desk scale: balls of words, the
//! unitary-intersection discreteness test, common fixed points of elliptic
//! families and orbit sampling.

use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::berkovich::BerkPoint;
use crate::error::{Error, Result};
use crate::geometry::FixedLocus;
use crate::moebius::{ElementClass, MobiusMap};
use crate::padic::{Magnitude, PadicContext};
use crate::projective::ProjPoint;

pub const DEFAULT_WORD_BUDGET: usize = 200_000;
/// Largest family accepted by [`PadicContext::common_fixed_point`].
pub const MAX_FAMILY: usize = 16;

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub generators: Vec<MobiusMap>,
    pub max_word_length: usize,
    /// Maximal number of products evaluated while enumerating.
    pub budget: usize,
}

impl GroupSpec {
    pub fn new(generators: Vec<MobiusMap>, max_word_length: usize) -> Self {
        GroupSpec { generators, max_word_length, budget: DEFAULT_WORD_BUDGET }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }
}

/// A letter: generator index and whether it is inverted.
type Letter = (usize, bool);

fn word_string(w: &[Letter]) -> String {
    if w.is_empty() {
        return "id".into();
    }
    w.iter()
        .map(|&(i, inv)| if inv { format!("g{}^-1", i + 1) } else { format!("g{}", i + 1) })
        .collect::<Vec<_>>()
        .join("*")
}

/// Element of a ball together with a shortest word producing it.
#[derive(Clone, Debug)]
pub struct WordElement {
    pub word: String,
    pub length: usize,
    pub map: MobiusMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    DiscreteCertified,
    NotCertified,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::DiscreteCertified => "DISCRETE_CERTIFIED",
            Verdict::NotCertified => "NOT_CERTIFIED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct DiscretenessReport {
    pub verdict: Verdict,
    /// Minimum of `||g - I||` over nonidentity words where it is computable.
    pub min_distance_to_identity: Option<Magnitude>,
    pub class_census: BTreeMap<ElementClass, usize>,
    pub unitary_words: Vec<String>,
    /// Nonidentity words that are neither loxodromic nor unitary.
    pub other_words: Vec<String>,
    pub elements: usize,
    /// Words whose `||g - I||` needs a larger field.
    pub distance_unavailable: usize,
}

impl DiscretenessReport {
    pub const CAVEAT: &'static str = "certificate covers the enumerated ball only";

    pub fn to_json(&self) -> Value {
        let census: serde_json::Map<String, Value> =
            self.class_census.iter().map(|(c, n)| (c.as_str().to_string(), json!(n))).collect();
        json!({
            "verdict": self.verdict.as_str(),
            "min_distance_to_identity": self.min_distance_to_identity.as_ref().map(|m| m.to_string()),
            "class_census": census,
            "unitary_words": self.unitary_words,
            "other_words": self.other_words,
            "elements": self.elements,
            "distance_unavailable": self.distance_unavailable,
            "caveat": Self::CAVEAT,
        })
    }
}

/// Outcome of the common fixed point search.
#[derive(Clone, Debug)]
pub enum CommonFixed {
    Point(BerkPoint),
    /// The combined point is not fixed by the named element.
    Failed { counterexample: String },
}

#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub points: Vec<ProjPoint>,
    /// Minimal pairwise chordal distance over the whole sample.
    pub min_distance: Option<Magnitude>,
    /// The same over the orbit under the ball of half the depth.
    pub min_distance_half_depth: Option<Magnitude>,
    /// Heuristic: the minimum shrank between half depth and full depth.
    pub accumulation_suspected: bool,
}

impl PadicContext {
    /// Distinct elements of the ball of radius `max_word_length`, each with
    /// its shortlex-first word, in shortlex order.
    pub fn enumerate_ball(&self, spec: &GroupSpec) -> Result<Vec<WordElement>> {
        for g in &spec.generators {
            self.check_map(g)?;
        }
        let k = spec.generators.len();
        if spec.max_word_length.saturating_mul(k) > spec.budget {
            return Err(Error::BudgetExceeded(format!("{} letters over {} generators", spec.max_word_length, k)));
        }
        let letters: Vec<(Letter, MobiusMap)> = (0..k)
            .flat_map(|i| [((i, false), spec.generators[i].clone()), ((i, true), spec.generators[i].inverse())])
            .collect();
        let mut seen: HashSet<MobiusMap> = HashSet::new();
        let mut out = vec![WordElement { word: "id".into(), length: 0, map: MobiusMap::identity() }];
        seen.insert(MobiusMap::identity());
        let mut frontier: Vec<(Vec<Letter>, MobiusMap)> = vec![(vec![], MobiusMap::identity())];
        let mut spent = 0usize;
        for length in 1..=spec.max_word_length {
            let jobs: Vec<(&Vec<Letter>, &MobiusMap, &(Letter, MobiusMap))> = frontier
                .iter()
                .flat_map(|(w, g)| {
                    letters
                        .iter()
                        .filter(move |((i, inv), _)| w.last() != Some(&(*i, !*inv)))
                        .map(move |l| (w, g, l))
                })
                .collect();
            spent += jobs.len();
            if spent > spec.budget {
                return Err(Error::BudgetExceeded(format!("more than {} products at length {length}", spec.budget)));
            }
            let products: Vec<MobiusMap> = jobs.par_iter().map(|(_, g, (_, h))| g.compose(h)).collect();
            let mut next = Vec::new();
            for ((w, _, (l, _)), m) in jobs.into_iter().zip(products) {
                if seen.insert(m.clone()) {
                    let mut word = w.clone();
                    word.push(*l);
                    out.push(WordElement { word: word_string(&word), length, map: m.clone() });
                    next.push((word, m));
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    /// Checks the hypothesis "every nonidentity element is loxodromic" on the
    /// ball, which also rules out unitary elements.
    pub fn discreteness_report(&self, spec: &GroupSpec) -> Result<DiscretenessReport> {
        let ball = self.enumerate_ball(spec)?;
        let rows: Vec<Result<(ElementClass, bool, Option<Magnitude>)>> = ball
            .par_iter()
            .skip(1)
            .map(|e| {
                let class = self.classify(&e.map)?;
                let unitary = self.is_unitary(&e.map)?;
                let dist = match self.dist_to_identity(&e.map) {
                    Ok(d) => Some(d),
                    Err(Error::UnsupportedExtension { .. }) => None,
                    Err(other) => return Err(other),
                };
                Ok((class, unitary, dist))
            })
            .collect();
        let mut census = BTreeMap::new();
        census.insert(ElementClass::Identity, 1usize);
        let (mut unitary_words, mut other_words) = (vec![], vec![]);
        let mut min: Option<Magnitude> = None;
        let mut unavailable = 0;
        for (e, row) in ball.iter().skip(1).zip(rows) {
            let (class, unitary, dist) = row?;
            *census.entry(class).or_insert(0) += 1;
            if unitary {
                unitary_words.push(e.word.clone());
            } else if class != ElementClass::Loxodromic {
                other_words.push(e.word.clone());
            }
            match dist {
                Some(d) => min = Some(min.map_or(d.clone(), |m| m.min(d))),
                None => unavailable += 1,
            }
        }
        let verdict = if unitary_words.is_empty() && other_words.is_empty() {
            Verdict::DiscreteCertified
        } else {
            Verdict::NotCertified
        };
        Ok(DiscretenessReport {
            verdict,
            min_distance_to_identity: min,
            class_census: census,
            unitary_words,
            other_words,
            elements: ball.len(),
            distance_unavailable: unavailable,
        })
    }

    /// A point of the Berkovich tree fixed by every element.
    ///
    /// Each element and each product `g_i g_j`, `g_i^-1 g_j` must be elliptic
    /// or the identity. Fixed sets of elliptic maps are subtrees; a point
    /// for a family is the median of points for three subfamilies that each
    /// omit a different member.
    pub fn common_fixed_point(&self, elements: &[MobiusMap]) -> Result<CommonFixed> {
        if elements.len() > MAX_FAMILY {
            return Err(Error::BudgetExceeded(format!("{} elements, at most {MAX_FAMILY}", elements.len())));
        }
        let name = |i: usize| format!("g{}", i + 1);
        let elliptic = |g: &MobiusMap, word: String| -> Result<()> {
            let class = self.classify(g)?;
            if class.is_elliptic() || class == ElementClass::Identity {
                Ok(())
            } else {
                Err(Error::NotAllElliptic { word, class: class.to_string() })
            }
        };
        for (i, g) in elements.iter().enumerate() {
            elliptic(g, name(i))?;
        }
        for i in 0..elements.len() {
            for j in i + 1..elements.len() {
                elliptic(&elements[i].compose(&elements[j]), format!("{}*{}", name(i), name(j)))?;
                elliptic(&elements[i].inverse().compose(&elements[j]), format!("{}^-1*{}", name(i), name(j)))?;
            }
        }
        let loci: Vec<FixedLocus> = elements.iter().map(|g| self.fixed_locus(g)).collect::<Result<_>>()?;
        let active: Vec<usize> = (0..elements.len()).filter(|&i| !matches!(loci[i], FixedLocus::All)).collect();
        let mut memo = HashMap::new();
        let full: u32 = active.iter().fold(0, |m, &i| m | (1 << i));
        let point = match self.subfamily_point(&loci, full, &mut memo)? {
            Some(x) => x,
            None => {
                let (i, j) = self.disjoint_pair(&loci, &active)?;
                return Ok(CommonFixed::Failed { counterexample: format!("{}^-1*{}", name(i), name(j)) });
            }
        };
        for (i, g) in elements.iter().enumerate() {
            if !self.locus_membership(g, &point)? {
                return Ok(CommonFixed::Failed { counterexample: name(i) });
            }
        }
        Ok(CommonFixed::Point(point))
    }

    fn subfamily_point(
        &self,
        loci: &[FixedLocus],
        set: u32,
        memo: &mut HashMap<u32, Option<BerkPoint>>,
    ) -> Result<Option<BerkPoint>> {
        if let Some(x) = memo.get(&set) {
            return Ok(x.clone());
        }
        let members: Vec<usize> = (0..loci.len()).filter(|&i| set & (1 << i) != 0).collect();
        let x = match members.len() {
            0 => Some(BerkPoint::gauss()),
            1 => Some(self.nearest_to_gauss(&loci[members[0]])?),
            2 => self.locus_intersect(&loci[members[0]], &loci[members[1]])?,
            _ => {
                let mut pts = Vec::with_capacity(3);
                for &i in &members[..3] {
                    match self.subfamily_point(loci, set & !(1 << i), memo)? {
                        Some(x) => pts.push(x),
                        None => {
                            memo.insert(set, None);
                            return Ok(None);
                        }
                    }
                }
                Some(self.median(&pts[0], &pts[1], &pts[2])?)
            }
        };
        memo.insert(set, x.clone());
        Ok(x)
    }

    fn disjoint_pair(&self, loci: &[FixedLocus], active: &[usize]) -> Result<(usize, usize)> {
        for (n, &i) in active.iter().enumerate() {
            for &j in &active[n + 1..] {
                if self.locus_intersect(&loci[i], &loci[j])?.is_none() {
                    return Ok((i, j));
                }
            }
        }
        Err(Error::DegenerateConfiguration("pairwise intersecting subtrees without a common point".into()))
    }

    /// Orbit of `seed` under the ball of radius `depth`, with a heuristic
    /// accumulation flag.
    pub fn orbit_sample(&self, spec: &GroupSpec, seed: &ProjPoint, depth: usize) -> Result<OrbitSample> {
        self.check_point(seed)?;
        let ball = self.enumerate_ball(&GroupSpec { max_word_length: depth, ..spec.clone() })?;
        let mut points: Vec<ProjPoint> = vec![];
        let mut half_points: Vec<ProjPoint> = vec![];
        let half = depth.div_ceil(2);
        for e in &ball {
            let z = e.map.apply(seed);
            if e.length <= half && !half_points.contains(&z) {
                half_points.push(z.clone());
            }
            if !points.contains(&z) {
                points.push(z);
            }
        }
        let min_distance = self.min_pairwise(&points)?;
        let min_half = self.min_pairwise(&half_points)?;
        let accumulation_suspected = match (&min_distance, &min_half) {
            (Some(a), Some(b)) => a < b,
            _ => false,
        };
        Ok(OrbitSample { points, min_distance, min_distance_half_depth: min_half, accumulation_suspected })
    }

    fn min_pairwise(&self, pts: &[ProjPoint]) -> Result<Option<Magnitude>> {
        let mut best: Option<Magnitude> = None;
        for (i, z) in pts.iter().enumerate() {
            for w in &pts[i + 1..] {
                let d = self.chordal(z, w)?;
                best = Some(best.map_or(d.clone(), |b| b.min(d)));
            }
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::FieldElem;

    fn m(a: i64, b: i64, c: i64, d: i64) -> MobiusMap {
        MobiusMap::from_ints(a, b, c, d).unwrap()
    }

    #[test]
    fn balls() {
        let c = PadicContext::new(3, None).unwrap();
        let ball = c.enumerate_ball(&GroupSpec::new(vec![m(0, 1, 1, 0)], 5)).unwrap();
        assert_eq!(ball.len(), 2);
        let ball = c.enumerate_ball(&GroupSpec::new(vec![m(3, 0, 0, 1)], 3)).unwrap();
        assert_eq!(ball.len(), 7);
        let ball = c.enumerate_ball(&GroupSpec::new(vec![m(1, 1, 0, 1), m(-1, 0, 0, 1)], 2)).unwrap();
        let maps: Vec<&MobiusMap> = ball.iter().map(|e| &e.map).collect();
        for g in [m(1, -1, 0, 1), m(-1, 1, 0, 1), m(-1, -1, 0, 1)] {
            assert!(maps.contains(&&g), "{g}");
        }
        let distinct: HashSet<&MobiusMap> = maps.iter().copied().collect();
        assert_eq!(distinct.len(), maps.len());
        let tight = GroupSpec::new(vec![m(1, 1, 0, 1), m(0, 1, 1, 0)], 30).with_budget(100);
        assert!(matches!(c.enumerate_ball(&tight), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn reports() {
        let c = PadicContext::new(3, None).unwrap();
        let r = c.discreteness_report(&GroupSpec::new(vec![m(3, 0, 0, 1)], 4)).unwrap();
        assert_eq!(r.verdict, Verdict::DiscreteCertified);
        assert!(r.min_distance_to_identity.unwrap() >= Magnitude::one(3));
        let r = c.discreteness_report(&GroupSpec::new(vec![m(1, 1, 0, 1)], 4)).unwrap();
        assert_eq!(r.verdict, Verdict::NotCertified);
        assert_eq!(r.unitary_words.len(), 8);

        let c5 = PadicContext::new(5, Some(-3)).unwrap();
        let w = FieldElem::new(crate::padic::rat(-1, 2), crate::padic::rat(1, 2), Some(-3));
        let g = MobiusMap::diag(w.clone(), &w * &w).unwrap();
        let r = c5.discreteness_report(&GroupSpec::new(vec![g], 3)).unwrap();
        assert_eq!(r.verdict, Verdict::NotCertified);
        assert_eq!(r.class_census.get(&ElementClass::TameElliptic), Some(&2));
    }

    #[test]
    fn common_points() {
        let c = PadicContext::new(5, None).unwrap();
        let g = m(4, 0, 0, 1);
        match c.common_fixed_point(std::slice::from_ref(&g)).unwrap() {
            CommonFixed::Point(x) => assert!(c.berk_eq(&x, &BerkPoint::gauss()).unwrap()),
            other => panic!("{other:?}"),
        }
        let h = g.conjugate_by(&m(1, 1, -1, 1));
        match c.common_fixed_point(&[g.clone(), h.clone()]) {
            Ok(CommonFixed::Point(x)) => {
                assert!(c.locus_membership(&g, &x).unwrap() && c.locus_membership(&h, &x).unwrap())
            }
            Err(Error::NotAllElliptic { .. }) => {}
            other => panic!("{other:?}"),
        }
        let c3 = PadicContext::new(3, None).unwrap();
        let w = m(4, 0, 0, 1).conjugate_by(&m(2, 1, 1, 1));
        let CommonFixed::Point(x) = c3.common_fixed_point(&[w.clone(), w.compose(&w)]).unwrap() else { panic!() };
        assert!(c3.locus_membership(&w, &x).unwrap());
        let err = c3.common_fixed_point(&[w, m(3, 0, 0, 1)]).unwrap_err();
        assert!(matches!(err, Error::NotAllElliptic { .. }));
    }

    #[test]
    fn orbits() {
        let c = PadicContext::new(3, None).unwrap();
        let o = c.orbit_sample(&GroupSpec::new(vec![m(1, 1, 0, 1)], 6), &ProjPoint::zero(), 6).unwrap();
        assert_eq!(o.points.len(), 13);
        assert_eq!(o.min_distance, Some(Magnitude::p_pow_int(3, -2)));
        assert!(o.accumulation_suspected);
        let o = c.orbit_sample(&GroupSpec::new(vec![m(3, 0, 0, 1)], 6), &ProjPoint::one(), 6).unwrap();
        assert_eq!(o.points.len(), 13);
        assert!(o.accumulation_suspected);
        let o = c.orbit_sample(&GroupSpec::new(vec![m(0, 1, 1, 0), m(-1, 0, 0, 1)], 6), &ProjPoint::int(2), 6).unwrap();
        assert!(!o.accumulation_suspected);
    }
}
