//! Extraction of the `E∞` module (with its `v₁`-action) from a fully run
//! page, and its decomposition into cyclic summands.

use std::collections::BTreeMap;

use fp_linalg::{Echelon, SparseVec};
use graded_core::{
    Bidegree, CyclicDecomposition, Generator, Monomial, PrimeContext, StemWindow, Torsion,
    TorsionMultisets,
};
use serde::{Deserialize, Serialize};

use crate::kind::PageKind;
use crate::linear::SsPage;
use crate::EngineError;

/// A cyclic summand of `E∞` with a representing cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EInfClass {
    pub bidegree: Bidegree,
    /// The representing cycle as a combination of `E₂` monomials.
    pub representative: Vec<(Monomial, u32)>,
    pub torsion: Torsion,
}

impl EInfClass {
    /// Human-readable name of the representative.
    pub fn label(&self) -> String {
        match self.representative.as_slice() {
            [(m, 1)] => m.to_string(),
            terms => terms
                .iter()
                .map(|(m, c)| {
                    if *c == 1 {
                        m.to_string()
                    } else {
                        format!("{c}·{m}")
                    }
                })
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }
}

/// A summand whose `v₁`-tower left the faithful region before dying: its
/// torsion is only known to be at least `at_least`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncertifiedClass {
    pub bidegree: Bidegree,
    pub at_least: u64,
}

/// The `E∞`-page over a stem window, as a graded 𝔽_p[v₁]-module.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EInfResult {
    pub kind: PageKind,
    pub window: StemWindow,
    pub cutoff: i64,
    /// Cyclic summands generated in the window, with certified torsion.
    pub classes: Vec<EInfClass>,
    /// Summands generated in the window whose torsion is not certified.
    pub uncertified: Vec<UncertifiedClass>,
    /// 𝔽_p-dimension of every non-zero bidegree in the window.
    pub dims: BTreeMap<Bidegree, u64>,
}

impl EInfResult {
    pub fn ctx(&self) -> PrimeContext {
        self.kind.ctx
    }

    pub fn is_certified(&self) -> bool {
        self.uncertified.is_empty()
    }

    /// The certified summands as a [`CyclicDecomposition`].
    pub fn decomposition(&self) -> CyclicDecomposition {
        let mut out = CyclicDecomposition::new();
        for (k, c) in self.classes.iter().enumerate() {
            let mut label = c.label();
            if out.generators().iter().any(|g| g.label == label) {
                label = format!("{label}#{k}");
            }
            out.push(Generator {
                label,
                bidegree: c.bidegree,
                torsion: c.torsion,
            })
            .expect("labels made unique");
        }
        out
    }

    pub fn torsion_multisets(&self) -> TorsionMultisets {
        self.decomposition().torsion_multisets(self.window)
    }

    pub fn dim(&self, b: Bidegree) -> u64 {
        self.dims.get(&b).copied().unwrap_or(0)
    }
}

/// Faithful `E∞` data of one piece.
struct PieceEinf {
    /// Representing cycles, in the piece's monomial coordinates.
    reps: Vec<SparseVec>,
    /// Echelon of faithful boundaries followed by the representatives; the
    /// history of a row records its class in representative coordinates.
    solver: Echelon,
    /// Map from history index (position among faithful cycles) to rep index.
    rep_of_history: BTreeMap<u32, usize>,
}

fn piece_einf(page: &SsPage, i: usize) -> PieceEinf {
    let fp = page.fp().clone();
    let fs = page.pieces()[i].faithful_start;
    let mut zf = Echelon::new(fp.clone());
    for z in page.cycles(i) {
        zf.insert(z.clone());
    }
    let mut solver = Echelon::with_history(fp.clone());
    for b in page.boundary(i).rows() {
        if b.lead().is_some_and(|(l, _)| l >= fs) {
            solver
                .insert_with_history(b.clone(), SparseVec::zero())
                .expect("boundary rows are independent");
        }
    }
    let mut reps = Vec::new();
    let mut rep_of_history = BTreeMap::new();
    let mut k = 0u32;
    for z in zf.rows() {
        if !z.lead().is_some_and(|(l, _)| l >= fs) {
            continue;
        }
        if solver
            .insert_with_history(z.clone(), SparseVec::unit(k))
            .is_ok()
        {
            rep_of_history.insert(k, reps.len());
            reps.push(z.clone());
        }
        k += 1;
    }
    PieceEinf {
        reps,
        solver,
        rep_of_history,
    }
}

/// The `v₁`-multiplication `E∞(X) → E∞(X + q)` in representative
/// coordinates; `None` when some image leaves the faithful region.
fn v1_matrix(
    page: &SsPage,
    data: &[PieceEinf],
    from: usize,
    to: Option<usize>,
) -> Result<Option<Vec<SparseVec>>, EngineError> {
    let fp = page.fp();
    let src = &page.pieces()[from];
    let mut cols = Vec::with_capacity(data[from].reps.len());
    for r in &data[from].reps {
        let Some(t) = to else { return Ok(None) };
        let tgt = &page.pieces()[t];
        let mut pairs = Vec::with_capacity(r.nnz());
        for (i, c) in r.iter() {
            let m = src.monos[i as usize].times_v1(1);
            match tgt.index.get(&m) {
                Some(&j) if tgt.is_faithful(j) => pairs.push((j, c as i64)),
                _ => return Ok(None),
            }
        }
        let v = SparseVec::from_pairs(pairs, fp);
        let (rem, h) = data[t].solver.reduce_with_history(v, SparseVec::zero());
        if !rem.is_zero() {
            return Err(EngineError::Inconsistent {
                at: src.bidegree,
                detail: "v₁ times a permanent cycle is not a permanent cycle".into(),
            });
        }
        let coords: Vec<(u32, i64)> = h
            .iter()
            .map(|(k, c)| (data[t].rep_of_history[&k] as u32, fp.neg(c) as i64))
            .collect();
        cols.push(SparseVec::from_pairs(coords, fp));
    }
    Ok(Some(cols))
}

fn apply(m: &[SparseVec], v: &SparseVec, fp: &fp_linalg::Fp) -> SparseVec {
    let mut out = SparseVec::zero();
    for (i, c) in v.iter() {
        out.axpy(c, &m[i as usize], fp);
    }
    out
}

fn span_rank(vs: &[SparseVec], fp: &fp_linalg::Fp) -> usize {
    let mut e = Echelon::new(fp.clone());
    for v in vs {
        e.insert(v.clone());
    }
    e.rank()
}

/// Extract `E∞` with its `v₁`-module structure on the page's window.
pub(crate) fn extract_einf(page: &SsPage) -> Result<EInfResult, EngineError> {
    let kind = *page.kind();
    let q = kind.ctx.q();
    let fp = page.fp().clone();
    let window = page.window();
    let pieces = page.pieces();
    let data: Vec<PieceEinf> = (0..pieces.len()).map(|i| piece_einf(page, i)).collect();

    let mut dims = BTreeMap::new();
    for (i, pc) in pieces.iter().enumerate() {
        if window.contains(pc.bidegree.stem) && !data[i].reps.is_empty() {
            dims.insert(pc.bidegree, data[i].reps.len() as u64);
        }
    }

    // Chains of pieces linked by v₁, keyed by (line, stem mod q).
    let mut chains: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, pc) in pieces.iter().enumerate() {
        chains
            .entry((pc.bidegree.line, pc.bidegree.stem.rem_euclid(q)))
            .or_default()
            .push(i);
    }

    // v₁-maps are evaluated only where the truncation is known to be exact:
    // from one v₁-step below the window to the end of the longest tower a
    // faithful class can support.
    let mut classes = Vec::new();
    let mut uncertified = Vec::new();
    for members in chains.values() {
        // Lay the chain out on consecutive stems (missing pieces are zero).
        let first = pieces[members[0]].bidegree;
        let last = pieces[*members.last().expect("non-empty")].bidegree;
        let len = ((last.stem - first.stem) / q + 1) as usize;
        let slot = |k: usize| page.piece_index(first.shift_v1(k as i64, q));
        let dim = |k: usize| slot(k).map_or(0, |i| data[i].reps.len());
        // maps[k] : slot k → slot k+1; `None` when not faithful.
        let mut maps: Vec<Option<Vec<SparseVec>>> = Vec::with_capacity(len);
        for k in 0..len {
            let m = match slot(k) {
                _ if !page.is_trusted(first.stem + k as i64 * q) => None,
                None => Some(Vec::new()),
                Some(i) if k + 1 < len => v1_matrix(page, &data, i, slot(k + 1))?,
                Some(i) if data[i].reps.is_empty() => Some(Vec::new()),
                Some(_) => None,
            };
            maps.push(m);
        }
        let in_window: Vec<usize> = (0..len)
            .filter(|&k| window.contains(first.stem + k as i64 * q) && dim(k) > 0)
            .collect();
        if in_window.is_empty() {
            continue;
        }
        // rk[i][j] = rank of the composite slot i → slot j; computed for the
        // birth slots needed (i ∈ in_window and i − 1).
        let mut rank_from: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut births: Vec<usize> = in_window.clone();
        births.extend(in_window.iter().filter(|&&k| k > 0).map(|&k| k - 1));
        births.sort();
        births.dedup();
        for &i in &births {
            let mut cur: Vec<SparseVec> = (0..dim(i) as u32).map(SparseVec::unit).collect();
            let mut ranks = Vec::new();
            for map in &maps[i..len] {
                let r = span_rank(&cur, &fp);
                ranks.push(r);
                if r == 0 {
                    break;
                }
                match map {
                    Some(m) => cur = cur.iter().map(|v| apply(m, v, &fp)).collect(),
                    None => {
                        // unknown beyond j: mark with a sentinel rank
                        ranks.push(usize::MAX);
                        break;
                    }
                }
            }
            rank_from.insert(i, ranks);
        }
        let rk = |i: Option<usize>, j: usize| -> Option<usize> {
            let Some(i) = i else { return Some(0) };
            if j < i {
                return Some(dim(i));
            }
            let ranks = &rank_from[&i];
            match ranks.get(j - i) {
                Some(&usize::MAX) => None,
                Some(&r) => Some(r),
                None => Some(0),
            }
        };
        let mut pending: Vec<(usize, u64)> = Vec::new();
        for &i in &in_window {
            let prev = i.checked_sub(1);
            let mut total = 0usize;
            for j in i..len {
                let (a, b, c, d) = (
                    rk(Some(i), j),
                    rk(prev, j),
                    rk(Some(i), j + 1),
                    rk(prev, j + 1),
                );
                let bidegree = first.shift_v1(i as i64, q);
                match (a, b, c, d) {
                    (Some(a), Some(b), Some(c), Some(d)) => {
                        let mult = (a + d) as i64 - (b + c) as i64;
                        for _ in 0..mult.max(0) {
                            pending.push((i, (j - i + 1) as u64));
                        }
                        total += mult.max(0) as usize;
                    }
                    _ => {
                        // The tower's fate at slot j is not certified: every
                        // remaining generator born at i lives at least j − i + 1.
                        let born = (rk(Some(i), i).unwrap_or(0) - rk(prev, i).unwrap_or(0)) as i64;
                        for _ in 0..(born - total as i64).max(0) {
                            uncertified.push(UncertifiedClass {
                                bidegree,
                                at_least: (j - i + 1) as u64,
                            });
                        }
                        break;
                    }
                }
                if a == Some(0) {
                    break;
                }
            }
        }
        // Representatives for the certified classes of this chain.
        let mut by_slot: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (i, r) in pending.drain(..) {
            by_slot.entry(i).or_default().push(r);
        }
        for (i, torsions) in by_slot {
            let pidx = slot(i).expect("slot has classes");
            let bidegree = pieces[pidx].bidegree;
            for (r, coords) in choose_representatives(&maps, i, dim, &fp, torsions) {
                let mut acc = SparseVec::zero();
                for (k, c) in coords.iter() {
                    acc.axpy(c, &data[pidx].reps[k as usize], &fp);
                }
                let representative = acc
                    .iter()
                    .map(|(m, c)| (pieces[pidx].monos[m as usize], c))
                    .collect();
                classes.push(EInfClass {
                    bidegree,
                    representative,
                    torsion: Torsion::Finite(r),
                });
            }
        }
    }
    classes.sort_by_key(|a| (a.bidegree, a.torsion));
    uncertified.sort_by_key(|u| (u.bidegree, u.at_least));
    Ok(EInfResult {
        kind,
        window,
        cutoff: page.cutoff(),
        classes,
        uncertified,
        dims,
    })
}

/// Pick a complement of `v₁ · E∞(slot i − 1)` inside `E∞(slot i)` and pair
/// its vectors with the torsion orders found by persistence.  For the pages
/// at hand every complement vector generates its own summand, so the
/// annihilation orders of the chosen vectors reproduce the persistence
/// orders; otherwise the vectors are paired in order.
fn choose_representatives(
    maps: &[Option<Vec<SparseVec>>],
    i: usize,
    dim: impl Fn(usize) -> usize,
    fp: &fp_linalg::Fp,
    mut torsions: Vec<u64>,
) -> Vec<(u64, SparseVec)> {
    torsions.sort();
    let mut image = Echelon::new(fp.clone());
    if i > 0 {
        if let Some(m) = &maps[i - 1] {
            for c in m {
                image.insert(c.clone());
            }
        }
    }
    let mut candidates = Vec::new();
    for k in 0..dim(i) as u32 {
        if image.insert(SparseVec::unit(k)).is_some() {
            candidates.push(SparseVec::unit(k));
        }
    }
    let order = |v: &SparseVec| -> u64 {
        let mut cur = v.clone();
        let mut j = i;
        loop {
            if cur.is_zero() {
                return (j - i) as u64;
            }
            match maps.get(j) {
                Some(Some(m)) => cur = apply(m, &cur, fp),
                _ => return u64::MAX,
            }
            j += 1;
        }
    };
    let mut with_order: Vec<(u64, SparseVec)> =
        candidates.into_iter().map(|v| (order(&v), v)).collect();
    with_order.sort_by_key(|(r, _)| *r);
    let orders: Vec<u64> = with_order.iter().map(|(r, _)| *r).collect();
    if orders != torsions {
        return torsions
            .into_iter()
            .zip(with_order.into_iter().map(|(_, v)| v))
            .collect();
    }
    with_order
}
