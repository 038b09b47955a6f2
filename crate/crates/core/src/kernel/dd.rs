//! Double-description method (Motzkin) for the extreme rays of a pointed
//! polyhedral cone `{y : row_i · y >= 0}`.
//!
//! Both conversions run through this engine: facets of a point set are the
//! extreme rays of the cone of valid inequalities, and vertices of a
//! halfspace system are the extreme rays of its homogenization. Adjacency is
//! decided combinatorially from incidence sets, so ray coordinates only feed
//! the sign classification.

use fixedbitset::FixedBitSet;
use nalgebra::DMatrix;
use rayon::prelude::*;

use super::linalg::{dot, normalized};

#[derive(Debug, Clone)]
pub(crate) struct Ray {
    pub(crate) coords: Vec<f64>,
    /// Processed rows on which this ray is tight.
    pub(crate) zero: FixedBitSet,
}

/// The constraint matrix has a nontrivial null space, so the cone contains a line.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NotPointed;

pub(crate) struct DoubleDescription<'a> {
    rows: &'a [Vec<f64>],
    dim: usize,
    eps: f64,
    /// Rays by slot; removed rays leave a hole that later rays reuse.
    slots: Vec<Option<Ray>>,
    free: Vec<usize>,
    live: usize,
    /// Slots of the rays tight at each processed row.
    tight_at: Vec<Vec<u32>>,
    added: FixedBitSet,
}

impl<'a> DoubleDescription<'a> {
    fn with_rays(rows: &'a [Vec<f64>], dim: usize, eps: f64, added: FixedBitSet, rays: Vec<Ray>) -> Self {
        let mut dd = DoubleDescription {
            rows,
            dim,
            eps,
            slots: Vec::with_capacity(rays.len()),
            free: Vec::new(),
            live: 0,
            tight_at: vec![Vec::new(); rows.len()],
            added,
        };
        for r in rays {
            dd.push(r);
        }
        dd
    }

    fn push(&mut self, ray: Ray) {
        let k = match self.free.pop() {
            Some(k) => k,
            None => {
                self.slots.push(None);
                self.slots.len() - 1
            }
        };
        for j in ray.zero.ones() {
            self.tight_at[j].push(k as u32);
        }
        self.slots[k] = Some(ray);
        self.live += 1;
    }

    /// Starts from a simplicial cone spanned by `dim` well-conditioned rows.
    /// Rows should be unit length.
    pub(crate) fn new(rows: &'a [Vec<f64>], dim: usize, eps: f64) -> Result<Self, NotPointed> {
        let m = rows.len();
        let mut residual: Vec<Vec<f64>> = rows.to_vec();
        let mut chosen: Vec<usize> = Vec::with_capacity(dim);
        let mut used = vec![false; m];
        for _ in 0..dim {
            let best = (0..m)
                .filter(|&i| !used[i])
                .map(|i| (i, dot(&residual[i], &residual[i])))
                .fold(None, |acc: Option<(usize, f64)>, x| match acc {
                    Some(a) if a.1 >= x.1 => Some(a),
                    _ => Some(x),
                });
            let Some((i, r2)) = best else {
                return Err(NotPointed);
            };
            if r2.sqrt() <= 1e-8 {
                return Err(NotPointed);
            }
            let q = normalized(&residual[i]).ok_or(NotPointed)?;
            used[i] = true;
            chosen.push(i);
            for r in residual.iter_mut() {
                let c = dot(r, &q);
                r.iter_mut().zip(&q).for_each(|(x, qx)| *x -= c * qx);
            }
        }
        let basis = DMatrix::from_fn(dim, dim, |r, c| rows[chosen[r]][c]);
        let inv = basis.try_inverse().ok_or(NotPointed)?;
        let mut added = FixedBitSet::with_capacity(m);
        for &i in &chosen {
            added.insert(i);
        }
        let rays = (0..dim)
            .map(|j| {
                let col: Vec<f64> = inv.column(j).iter().copied().collect();
                let coords = normalized(&col).ok_or(NotPointed)?;
                let mut zero = FixedBitSet::with_capacity(m);
                for (r, &i) in chosen.iter().enumerate() {
                    if r != j {
                        zero.insert(i);
                    }
                }
                Ok(Ray { coords, zero })
            })
            .collect::<Result<Vec<_>, NotPointed>>()?;
        Ok(Self::with_rays(rows, dim, eps, added, rays))
    }

    /// Resumes from a known double-description pair: `rays` must be exactly
    /// the extreme rays of the cone cut out by the `processed` rows.
    pub(crate) fn seeded(
        rows: &'a [Vec<f64>],
        dim: usize,
        eps: f64,
        processed: &[usize],
        rays: Vec<Vec<f64>>,
    ) -> Self {
        let m = rows.len();
        let mut added = FixedBitSet::with_capacity(m);
        for &i in processed {
            added.insert(i);
        }
        let rays = rays
            .into_iter()
            .filter_map(|r| normalized(&r))
            .map(|coords| {
                let mut zero = FixedBitSet::with_capacity(m);
                for &i in processed {
                    if dot(&rows[i], &coords).abs() <= eps {
                        zero.insert(i);
                    }
                }
                Ray { coords, zero }
            })
            .collect();
        Self::with_rays(rows, dim, eps, added, rays)
    }

    pub(crate) fn is_added(&self, i: usize) -> bool {
        self.added.contains(i)
    }

    /// Adds every not-yet-processed row, in the given order.
    pub(crate) fn run(&mut self, order: impl IntoIterator<Item = usize>) {
        for i in order {
            if !self.added.contains(i) {
                self.insert(i);
            }
        }
    }

    pub(crate) fn insert(&mut self, i: usize) {
        let row = &self.rows[i];
        let vals: Vec<f64> = self
            .slots
            .iter()
            .map(|s| s.as_ref().map_or(f64::NAN, |r| dot(row, &r.coords)))
            .collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zero = Vec::new();
        for (k, &v) in vals.iter().enumerate() {
            if v > self.eps {
                pos.push(k);
            } else if v < -self.eps {
                neg.push(k);
            } else if v.abs() <= self.eps {
                zero.push(k);
            }
        }
        self.added.insert(i);
        let new_rays = if neg.is_empty() { Vec::new() } else { self.combine(i, &vals, &pos, &neg) };

        let mut removed = vec![false; self.slots.len()];
        let mut touched = FixedBitSet::with_capacity(self.rows.len());
        for &k in &neg {
            let r = self.slots[k].take().expect("negative ray is live");
            touched.union_with(&r.zero);
            removed[k] = true;
            self.free.push(k);
            self.live -= 1;
        }
        for j in touched.ones() {
            self.tight_at[j].retain(|&k| !removed[k as usize]);
        }
        for k in zero {
            self.slots[k].as_mut().expect("zero ray is live").zero.insert(i);
            self.tight_at[i].push(k as u32);
        }
        // lowest free slots are reused first
        self.free.sort_unstable_by(|a, b| b.cmp(a));
        for r in new_rays {
            self.push(r);
        }
    }

    /// New rays from adjacent (positive, negative) pairs for row `i`.
    fn combine(&self, i: usize, vals: &[f64], pos: &[usize], neg: &[usize]) -> Vec<Ray> {
        let need = self.dim.saturating_sub(2);
        let slots = &self.slots;
        let tight_at = &self.tight_at;
        let ray = |k: usize| slots[k].as_ref().expect("live ray");
        let mut is_pos = vec![false; slots.len()];
        for &k in pos {
            is_pos[k] = true;
        }
        neg.par_iter()
            .map_init(
                || vec![0u32; slots.len()],
                |count, &ni| {
                    let rn = ray(ni);
                    // positive rays sharing at least `need` tight rows with `rn`
                    let candidates: Vec<usize> = if need == 0 {
                        pos.to_vec()
                    } else {
                        let mut hit = Vec::new();
                        for j in rn.zero.ones() {
                            for &k in &tight_at[j] {
                                let k = k as usize;
                                if is_pos[k] {
                                    if count[k] == 0 {
                                        hit.push(k);
                                    }
                                    count[k] += 1;
                                }
                            }
                        }
                        hit.retain(|&k| {
                            let keep = count[k] as usize >= need;
                            count[k] = 0;
                            keep
                        });
                        hit.sort_unstable();
                        hit
                    };
                    (ni, candidates)
                },
            )
            .flat_map_iter(|(ni, candidates)| {
                let rn = ray(ni);
                candidates
                    .into_iter()
                    .filter_map(|pi| {
                        let rp = ray(pi);
                        let mut z = rp.zero.clone();
                        z.intersect_with(&rn.zero);
                        let blocked = match z.ones().min_by_key(|&j| tight_at[j].len()) {
                            Some(j) => tight_at[j].iter().any(|&k| {
                                let k = k as usize;
                                k != pi && k != ni && z.is_subset(&ray(k).zero)
                            }),
                            None => self.live > 2,
                        };
                        if blocked {
                            return None;
                        }
                        let (vp, vn) = (vals[pi], vals[ni]);
                        let combo: Vec<f64> = rn
                            .coords
                            .iter()
                            .zip(&rp.coords)
                            .map(|(a, b)| vp * a - vn * b)
                            .collect();
                        let coords = normalized(&combo)?;
                        z.insert(i);
                        Some(Ray { coords, zero: z })
                    })
                    .collect::<Vec<_>>()
            })
            .collect()
    }

    pub(crate) fn into_rays(self) -> Vec<Ray> {
        self.slots.into_iter().flatten().collect()
    }
}
