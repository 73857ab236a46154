//! Brute-force kernel of `gr(φ − can)`.
//!
//! For a truncation level `m`, the source in bidegree `(X, line)` and
//! `v₁`-adic degree `s` is `⊕_{i=0}^{m} grˢ E∞(hfp, level i)` and the target
//! is `⊕_{i=1}^{m} grˢ E∞(tate, level i)`.  Both are spanned by surviving
//! monomials of divisibility `s`.  `can` sends a level-`i` class to the
//! level-`i` Tate construction and `φ` sends it to level `i + 1`.
//!
//! `φ` lands in `μ`-inverted names; the Tate name is the monomial given by
//! [`gr_phi`].  The oracle checks, piece by piece, that the `μ`-inverted
//! class is non-zero exactly when the Tate-named class is.
//!
//! Multiplication by `v₁` maps `(X, s)` to `(X + q, s + 1)` and is a
//! monomial map on the sources.  Along each chain `X − sq = Y` the kernels
//! form a persistence module.  Its bars are the cyclic summands: a bar born
//! at `s` and dying after `r` steps is a generator of torsion order `r`.

use fp_linalg::{Echelon, Fp, SparseVec};
use graded_core::{
    Bidegree, CyclicDecomposition, Monomial, PrimeContext, StemWindow, Torsion, LINES,
};
use nygaard_engine::Variant;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::class::{gr_can, gr_phi, GrV1Class};
use crate::tower::Tower;

/// One `(X, line, s)` piece of the map `gr(φ − can)`.
#[derive(Debug, Clone, Default)]
pub struct Piece {
    pub sources: Vec<Monomial>,
    pub targets: Vec<Monomial>,
    index: FxHashMap<Monomial, u32>,
    /// Rank of `gr(φ − can)` on this piece.
    pub rank: usize,
    /// Basis of the kernel in source coordinates.
    pub kernel: Vec<SparseVec>,
}

/// A cyclic summand found by the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bar {
    /// Bidegree of the generator.
    pub bidegree: Bidegree,
    /// `v₁`-adic degree of the generator (zero unless `v₁` fails to be
    /// surjective on the kernel).
    pub birth: i64,
    pub torsion: u64,
    pub representative: Vec<(Monomial, u32)>,
}

impl Bar {
    pub fn label(&self) -> String {
        let terms: Vec<String> = self
            .representative
            .iter()
            .map(|(m, c)| {
                if *c == 1 {
                    m.to_string()
                } else {
                    format!("{c}·{m}")
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// Where `gr(φ − can)` fails to be onto the Tate pieces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDefect {
    pub bidegree: Bidegree,
    pub s: i64,
    pub target_dim: usize,
    pub rank: usize,
}

/// Where `v₁ : grˢ⁻¹ → grˢ` of the kernel fails to be onto.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct V1Defect {
    pub bidegree: Bidegree,
    pub s: i64,
    pub missing: usize,
}

/// Consistency findings of an oracle run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub pieces_checked: usize,
    /// Pieces where `gr(φ − can)` is not surjective.
    pub map_defects: Vec<MapDefect>,
    /// Kernel pieces not generated from `v₁`-degree zero.
    pub v1_defects: Vec<V1Defect>,
    /// `φ`-images whose `μ`-inverted and Tate names disagree on vanishing.
    pub naming_mismatches: Vec<String>,
    /// Survival anomalies of the underlying spectral sequences.
    pub engine_anomalies: usize,
}

impl OracleReport {
    pub fn is_clean(&self) -> bool {
        self.map_defects.is_empty()
            && self.v1_defects.is_empty()
            && self.naming_mismatches.is_empty()
            && self.engine_anomalies == 0
    }
}

/// The kernel of `gr(φ − can)` on levels `0..=top`.
#[derive(Debug)]
pub struct KernelOracle {
    tower: Tower,
    top: u32,
    fp: Fp,
    q: i64,
    /// Every `v₁`-adic degree of the sources is below this bound.
    s_bound: i64,
    pieces: FxHashMap<(i64, i64, i64), Piece>,
    naming_mismatches: Vec<String>,
}

impl KernelOracle {
    /// The oracle with the default `v₁`-adic cutoff `1 + p + ⋯ + p^top`,
    /// the largest torsion order on any level.
    pub fn new(ctx: PrimeContext, twist: u32, top: u32) -> Self {
        Self::with_v1_cutoff(ctx, twist, top, ctx.geo(0, top as i64))
    }

    /// The oracle considering `v₁`-adic degrees `s < cutoff` (at least the
    /// default, so that no class is lost).
    pub fn with_v1_cutoff(ctx: PrimeContext, twist: u32, top: u32, cutoff: i64) -> Self {
        Self {
            tower: Tower::new(ctx, twist),
            top,
            fp: Fp::new(ctx.p()).expect("the context prime is prime"),
            q: ctx.q(),
            s_bound: cutoff.max(ctx.geo(0, top as i64)),
            pieces: FxHashMap::default(),
            naming_mismatches: Vec::new(),
        }
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn ctx(&self) -> PrimeContext {
        *self.tower.ctx()
    }

    pub fn tower(&mut self) -> &mut Tower {
        &mut self.tower
    }

    /// The largest `v₁`-adic degree that can occur, plus one.
    pub fn s_bound(&self) -> i64 {
        self.s_bound
    }

    fn ensure(&mut self, key: (i64, i64, i64)) {
        if !self.pieces.contains_key(&key) {
            let piece = self.build(key);
            self.pieces.insert(key, piece);
        }
    }

    /// The piece in bidegree `(stem, line)` and `v₁`-adic degree `s`.
    pub fn piece(&mut self, stem: i64, line: i64, s: i64) -> &Piece {
        self.ensure((stem, line, s));
        &self.pieces[&(stem, line, s)]
    }

    fn build(&mut self, (stem, line, s): (i64, i64, i64)) -> Piece {
        if s < 0 || s >= self.s_bound {
            return Piece::default();
        }
        let ctx = *self.tower.ctx();
        let b = Bidegree::new(stem, line);
        let mut sources = Vec::new();
        for i in 0..=self.top {
            sources.extend_from_slice(self.tower.layer(Variant::Hfp, i, b, s));
        }
        let mut targets = Vec::new();
        for i in 1..=self.top {
            targets.extend_from_slice(self.tower.layer(Variant::Tate, i, b, s));
        }
        let target_index: FxHashMap<Monomial, u32> = targets
            .iter()
            .enumerate()
            .map(|(k, m)| (*m, k as u32))
            .collect();
        let mut e = Echelon::with_history(self.fp.clone());
        let mut kernel = Vec::new();
        for (k, x) in sources.iter().enumerate() {
            let c = GrV1Class::from_monomial(&self.tower.kind(Variant::Hfp, x.level), x, 1);
            let mut column: Vec<(u32, i64)> = Vec::new();
            if x.level >= 1 {
                if let Some(r) = gr_can(&c).and_then(|y| target_index.get(&y.monomial())) {
                    column.push((*r, -1));
                }
            }
            if x.level < self.top {
                if let Some(y) = gr_phi(&ctx, &c) {
                    let tate = target_index.get(&y.monomial()).copied();
                    let inverted = self.tower.in_layer(Variant::Muinv, x, s);
                    if inverted != tate.is_some() {
                        self.naming_mismatches.push(format!(
                            "φ({x}) at {b}, s = {s}: μ-inverted class {} but Tate class {} {}",
                            if inverted { "non-zero" } else { "zero" },
                            y.monomial(),
                            if tate.is_some() { "non-zero" } else { "zero" },
                        ));
                    }
                    if let Some(r) = tate {
                        column.push((r, 1));
                    }
                }
            }
            let column = SparseVec::from_pairs(column, &self.fp);
            if let Err(dependency) = e.insert_with_history(column, SparseVec::unit(k as u32)) {
                kernel.push(dependency);
            }
        }
        let index = sources
            .iter()
            .enumerate()
            .map(|(k, m)| (*m, k as u32))
            .collect();
        Piece {
            rank: e.rank(),
            sources,
            targets,
            index,
            kernel,
        }
    }

    /// `v₁ · v` for `v` in source coordinates of `key`, in the source
    /// coordinates one step up.
    fn push(&mut self, key: (i64, i64, i64), v: &SparseVec) -> SparseVec {
        let next = (key.0 + self.q, key.1, key.2 + 1);
        self.ensure(key);
        self.ensure(next);
        let (a, b) = (&self.pieces[&key], &self.pieces[&next]);
        let pairs = v
            .iter()
            .filter_map(|(i, c)| {
                b.index
                    .get(&a.sources[i as usize].times_v1(1))
                    .map(|&j| (j, c as i64))
            })
            .collect();
        SparseVec::from_pairs(pairs, &self.fp)
    }

    /// `𝔽_p`-dimension of the kernel in a bidegree (summed over `s`).
    pub fn dim(&mut self, b: Bidegree) -> u64 {
        (0..self.s_bound)
            .map(|s| self.piece(b.stem, b.line, s).kernel.len() as u64)
            .sum()
    }

    /// Dimensions over a window (non-zero entries only).
    pub fn dims(&mut self, window: StemWindow) -> std::collections::BTreeMap<Bidegree, u64> {
        let mut out = std::collections::BTreeMap::new();
        for stem in window.stems() {
            for line in LINES {
                let b = Bidegree::new(stem, line);
                let d = self.dim(b);
                if d > 0 {
                    out.insert(b, d);
                }
            }
        }
        out
    }

    /// The summands along the chain through `(y, line)` at `s = 0`, for
    /// births with stem at most `hi`.  The chain is followed beyond `hi`
    /// until the kernel vanishes, so torsion orders are exact.
    pub fn chain_bars(&mut self, y: i64, line: i64, hi: i64) -> Vec<Bar> {
        let q = self.q;
        let key = move |s: i64| (y + s * q, line, s);
        let mut spaces: Vec<Vec<SparseVec>> = Vec::new();
        for s in 0..self.s_bound {
            let k = key(s);
            let kernel = self.piece(k.0, k.1, k.2).kernel.clone();
            if k.0 > hi && kernel.is_empty() {
                break;
            }
            spaces.push(kernel);
        }
        let len = spaces.len();
        let mut bars = Vec::new();
        for i in 0..len {
            if key(i as i64).0 > hi {
                break;
            }
            let dim = spaces[i].len();
            if dim == 0 {
                continue;
            }
            let mut span = Echelon::new(self.fp.clone());
            if i > 0 {
                for v in spaces[i - 1].clone() {
                    let w = self.push(key(i as i64 - 1), &v);
                    span.insert(w);
                }
            }
            let births = {
                let mut probe = span.clone();
                let before = probe.rank();
                for v in &spaces[i] {
                    probe.insert(v.clone());
                }
                probe.rank() - before
            };
            let mut found = 0;
            let mut images = spaces[i].clone();
            let mut j = i;
            while found < births {
                let next: Vec<SparseVec> = if j + 1 < len {
                    images.iter().map(|v| self.push(key(j as i64), v)).collect()
                } else {
                    vec![SparseVec::zero(); dim]
                };
                // Combinations of the basis of V_i killed by v₁^{j−i+1}.
                let mut e = Echelon::with_history(self.fp.clone());
                let mut dead = Vec::new();
                for (k, w) in next.iter().enumerate() {
                    if let Err(d) = e.insert_with_history(w.clone(), SparseVec::unit(k as u32)) {
                        dead.push(d);
                    }
                }
                for d in dead {
                    let mut w = SparseVec::zero();
                    for (k, c) in d.iter() {
                        w.axpy(c, &spaces[i][k as usize], &self.fp);
                    }
                    if span.insert(w.clone()).is_some() {
                        found += 1;
                        let sources = &self.pieces[&key(i as i64)].sources;
                        bars.push(Bar {
                            bidegree: Bidegree::new(key(i as i64).0, line),
                            birth: i as i64,
                            torsion: (j - i + 1) as u64,
                            representative: w
                                .iter()
                                .map(|(k, c)| (sources[k as usize], c))
                                .collect(),
                        });
                    }
                }
                images = next;
                j += 1;
            }
        }
        bars
    }

    /// All summands with generator stem in the window.
    pub fn bars(&mut self, window: StemWindow) -> Vec<Bar> {
        let mut out = Vec::new();
        for y in window.stems() {
            for line in LINES {
                out.extend(self.chain_bars(y, line, window.hi));
            }
        }
        out
    }

    /// The summands as a cyclic decomposition labelled by representatives.
    pub fn decomposition(&mut self, window: StemWindow) -> (CyclicDecomposition, Vec<Bar>) {
        let bars = self.bars(window);
        let mut d = CyclicDecomposition::new();
        for bar in &bars {
            let label = bar.label();
            let label = if bar.birth == 0 {
                label
            } else {
                format!("v₁-degree {}: {label}", bar.birth)
            };
            d.add(label, bar.bidegree, Torsion::Finite(bar.torsion))
                .expect("representatives of distinct summands are distinct");
        }
        (d, bars)
    }

    /// Surjectivity of `gr(φ − can)` onto the Tate pieces and of `v₁` on the
    /// kernel, over a window.
    pub fn report(&mut self, window: StemWindow) -> OracleReport {
        let mut report = OracleReport::default();
        for stem in window.stems() {
            for line in LINES {
                let b = Bidegree::new(stem, line);
                for s in 0..self.s_bound {
                    let piece = self.piece(stem, line, s);
                    report.pieces_checked += 1;
                    let (rank, target_dim, dim) =
                        (piece.rank, piece.targets.len(), piece.kernel.len());
                    if rank < target_dim {
                        report.map_defects.push(MapDefect {
                            bidegree: b,
                            s,
                            target_dim,
                            rank,
                        });
                    }
                    if s == 0 || dim == 0 {
                        continue;
                    }
                    let below = (stem - self.q, line, s - 1);
                    let mut span = Echelon::new(self.fp.clone());
                    for v in self.piece(below.0, below.1, below.2).kernel.clone() {
                        let w = self.push(below, &v);
                        span.insert(w);
                    }
                    if span.rank() < dim {
                        report.v1_defects.push(V1Defect {
                            bidegree: b,
                            s,
                            missing: dim - span.rank(),
                        });
                    }
                }
            }
        }
        report.naming_mismatches = self.naming_mismatches.clone();
        report.engine_anomalies = self.tower.anomalies();
        report
    }

    /// Applies `gr(φ − can)` to a source vector of a piece, returning the
    /// image in target coordinates (used to verify kernel vectors).
    pub fn apply(&mut self, stem: i64, line: i64, s: i64, v: &SparseVec) -> SparseVec {
        let ctx = *self.tower.ctx();
        self.ensure((stem, line, s));
        let piece = &self.pieces[&(stem, line, s)];
        let targets: FxHashMap<Monomial, u32> = piece
            .targets
            .iter()
            .enumerate()
            .map(|(k, m)| (*m, k as u32))
            .collect();
        let mut pairs = Vec::new();
        for (k, c) in v.iter() {
            let x = piece.sources[k as usize];
            let class = GrV1Class::from_monomial(&self.tower.kind(Variant::Hfp, x.level), &x, c);
            if x.level >= 1 {
                if let Some(r) = gr_can(&class).and_then(|y| targets.get(&y.monomial())) {
                    pairs.push((*r, -(c as i64)));
                }
            }
            if x.level < self.top {
                if let Some(r) = gr_phi(&ctx, &class).and_then(|y| targets.get(&y.monomial())) {
                    pairs.push((*r, c as i64));
                }
            }
        }
        SparseVec::from_pairs(pairs, &self.fp)
    }
}
