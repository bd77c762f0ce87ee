//! Braid monodromy of configuration-space maps, extracted numerically.
//!
//! The basepoint of `Confₙℂ` is `{1, …, n}`. The loop for `σᵢ` turns points
//! `i` and `i+1` counterclockwise by `π` about their midpoint, so the left
//! point passes below. Braids are read off a trajectory by projecting to a
//! slightly rotated real axis. A crossing of adjacent strands emits `σ_pos`,
//! and the sign is positive when the left strand passes below. With these
//! conventions the `σᵢ` loop reads back as `σᵢ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::braid::{check_braid_homomorphism, find_conjugator, BraidError, BraidHom, BraidWord, HomCheck};
use crate::confmaps::{psi_k, resolve_quartic, ConfError, Configuration};
use crate::exec::Exec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MonoError {
    #[error("image points collide (separation {0:e})")]
    Collision(f64),
    #[error("step refinement exceeded depth {0}")]
    RefinementExhausted(usize),
    #[error("degenerate projection for every tried axis")]
    DegenerateProjection,
    #[error("strand matching is ambiguous at frame {0}")]
    AmbiguousMatch(usize),
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("generator index {i} out of range for {n} strands")]
    BadGenerator { n: usize, i: usize },
    #[error("map sends the basepoint to {found} points, expected {expected}")]
    WrongTarget { expected: usize, found: usize },
    #[error(transparent)]
    Conf(#[from] ConfError),
    #[error(transparent)]
    Braid(#[from] BraidError),
}

/// A sampled closed path of configurations. `strand_match[k][i]` is the
/// index in `frames[k+1]` of point `i` of `frames[k]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    times: Vec<f64>,
    frames: Vec<Configuration>,
    strand_match: Vec<Vec<usize>>,
}

impl Trajectory {
    pub fn new(
        times: Vec<f64>,
        frames: Vec<Configuration>,
        strand_match: Vec<Vec<usize>>,
    ) -> Result<Self, MonoError> {
        let bad = |m: &str| Err(MonoError::InvalidTrajectory(m.to_string()));
        if frames.is_empty() || times.len() != frames.len() {
            return bad("times and frames differ in length");
        }
        if strand_match.len() + 1 != frames.len() {
            return bad("need one matching per step");
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) {
            return bad("times must increase");
        }
        let n = frames[0].len();
        for (k, m) in strand_match.iter().enumerate() {
            let mut seen = vec![false; n];
            if frames[k + 1].len() != n || m.len() != n {
                return bad("frame sizes differ");
            }
            for &j in m {
                if j >= n || seen[j] {
                    return bad("matching is not a bijection");
                }
                seen[j] = true;
            }
        }
        Ok(Trajectory {
            times,
            frames,
            strand_match,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn frames(&self) -> &[Configuration] {
        &self.frames
    }

    pub fn strand_match(&self) -> &[Vec<usize>] {
        &self.strand_match
    }

    pub fn strands(&self) -> usize {
        self.frames[0].len()
    }

    /// `paths[s][k]`: position at frame `k` of the strand that starts as
    /// point `s` of the first frame.
    pub fn strand_paths(&self) -> Vec<Vec<Complex64>> {
        let n = self.strands();
        let mut idx: Vec<usize> = (0..n).collect();
        let mut paths: Vec<Vec<Complex64>> = vec![Vec::with_capacity(self.frames.len()); n];
        for k in 0..self.frames.len() {
            for s in 0..n {
                paths[s].push(self.frames[k].points()[idx[s]]);
            }
            if k < self.strand_match.len() {
                for i in idx.iter_mut() {
                    *i = self.strand_match[k][*i];
                }
            }
        }
        paths
    }

    /// Index in the last frame of each point of the first frame.
    pub fn endpoint_matching(&self) -> Vec<usize> {
        let n = self.strands();
        (0..n)
            .map(|s| self.strand_match.iter().fold(s, |i, m| m[i]))
            .collect()
    }

    /// The same path traversed backwards.
    pub fn reversed(&self) -> Trajectory {
        let t_end = *self.times.last().expect("nonempty");
        let t_start = self.times[0];
        let times = self.times.iter().rev().map(|t| t_start + t_end - t).collect();
        let frames = self.frames.iter().rev().cloned().collect();
        let strand_match = self
            .strand_match
            .iter()
            .rev()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (i, &j) in m.iter().enumerate() {
                    inv[j] = i;
                }
                inv
            })
            .collect();
        Trajectory {
            times,
            frames,
            strand_match,
        }
    }

    /// `self` followed by `other`, whose first frame must agree with the
    /// last frame of `self` as a set.
    pub fn concat(&self, other: &Trajectory) -> Result<Trajectory, MonoError> {
        let last = self.frames.last().expect("nonempty");
        let bridge = match_points(last, &other.frames[0], 0.4)
            .ok_or_else(|| MonoError::InvalidTrajectory("endpoints differ".into()))?;
        let mut strand_match = self.strand_match.clone();
        let mut frames = self.frames.clone();
        let mut times = self.times.clone();
        let shift = times.last().expect("nonempty") - other.times[0];
        // the bridge relabels the shared frame
        if let Some(first) = other.strand_match.first() {
            strand_match.push(bridge.iter().map(|&j| first[j]).collect());
        }
        strand_match.extend(other.strand_match.iter().skip(1).cloned());
        frames.extend(other.frames.iter().skip(1).cloned());
        times.extend(other.times.iter().skip(1).map(|t| t + shift));
        Trajectory::new(times, frames, strand_match)
    }
}

/// Nearest-neighbour matching, accepted only when every point moves less
/// than `ratio` times the separation of `from`.
fn match_points(from: &Configuration, to: &Configuration, ratio: f64) -> Option<Vec<usize>> {
    if from.len() != to.len() {
        return None;
    }
    let limit = ratio * from.separation();
    let mut used = vec![false; to.len()];
    let mut out = Vec::with_capacity(from.len());
    for p in from.points() {
        let (j, d) = to
            .points()
            .iter()
            .enumerate()
            .map(|(j, q)| (j, (p - q).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if !(d < limit) && d != 0.0 || used[j] {
            return None;
        }
        used[j] = true;
        out.push(j);
    }
    Some(out)
}

/// The loop representing `σᵢ` (1-based) at the basepoint `{1, …, n}`.
pub fn generator_loop(n: usize, i: usize, steps: usize) -> Result<Trajectory, MonoError> {
    if i == 0 || i >= n {
        return Err(MonoError::BadGenerator { n, i });
    }
    let steps = steps.max(1);
    let mid = i as f64 + 0.5;
    let mut times = Vec::with_capacity(steps + 1);
    let mut frames = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 / steps as f64;
        let mut pts: Vec<Complex64> = (1..=n).map(|j| Complex64::new(j as f64, 0.0)).collect();
        pts[i - 1] = mid + Complex64::from_polar(0.5, PI + PI * t);
        pts[i] = mid + Complex64::from_polar(0.5, PI * t);
        times.push(t);
        frames.push(Configuration::new(pts)?);
    }
    let identity: Vec<usize> = (0..n).collect();
    Trajectory::new(times, frames, vec![identity; steps])
}

/// Minimum separation along any generator loop: the rotating pair stays at
/// distance 1, and the others are at least `1/2` from the turning circle.
pub const GENERATOR_LOOP_SEPARATION: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackOptions {
    /// Matched displacement allowed, as a fraction of the separation.
    pub ratio: f64,
    /// Image separation below which the map is declared to collide.
    pub floor: f64,
    pub max_depth: usize,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            ratio: 0.4,
            floor: 1e-8,
            max_depth: 40,
        }
    }
}

struct Tracker<'a, F> {
    map: &'a F,
    paths: Vec<Vec<Complex64>>,
    source: &'a Trajectory,
    opts: TrackOptions,
    times: Vec<f64>,
    frames: Vec<Configuration>,
    strand_match: Vec<Vec<usize>>,
}

impl<F> Tracker<'_, F>
where
    F: Fn(&Configuration) -> Result<Configuration, ConfError>,
{
    /// Source configuration at global parameter `s ∈ [0, steps]`, linearly
    /// interpolated along matched strands.
    fn source_at(&self, s: f64) -> (f64, Configuration) {
        let last = self.paths[0].len() - 1;
        let k = (s.floor() as usize).min(last.saturating_sub(1));
        let frac = s - k as f64;
        if last == 0 || frac == 0.0 {
            let k = k.min(last);
            return (self.source.times[k], self.source.frames[k].clone());
        }
        let lerp = |a: Complex64, b: Complex64| a + (b - a) * frac;
        let pts = self.paths.iter().map(|p| lerp(p[k], p[k + 1])).collect();
        let t = self.source.times[k] + (self.source.times[k + 1] - self.source.times[k]) * frac;
        (t, Configuration::from_trusted(pts))
    }

    fn image_at(&self, s: f64) -> Result<(f64, Configuration), MonoError> {
        let (t, c) = self.source_at(s);
        let img = (self.map)(&c)?;
        let sep = img.separation();
        if sep < self.opts.floor {
            return Err(MonoError::Collision(sep));
        }
        Ok((t, img))
    }

    fn advance(
        &mut self,
        from: Configuration,
        s0: f64,
        s1: f64,
        depth: usize,
    ) -> Result<Configuration, MonoError> {
        let (t1, img) = self.image_at(s1)?;
        if let Some(m) = match_points(&from, &img, self.opts.ratio) {
            self.strand_match.push(m);
            self.times.push(t1);
            self.frames.push(img.clone());
            return Ok(img);
        }
        if depth >= self.opts.max_depth {
            return Err(MonoError::RefinementExhausted(depth));
        }
        let mid = 0.5 * (s0 + s1);
        let at_mid = self.advance(from, s0, mid, depth + 1)?;
        self.advance(at_mid, mid, s1, depth + 1)
    }
}

/// The image trajectory `F(loop)`, with steps bisected until every matched
/// displacement is below `ratio` times the separation.
pub fn track_map<F>(map: &F, source: &Trajectory, opts: TrackOptions) -> Result<Trajectory, MonoError>
where
    F: Fn(&Configuration) -> Result<Configuration, ConfError>,
{
    let mut tracker = Tracker {
        map,
        paths: source.strand_paths(),
        source,
        opts,
        times: Vec::new(),
        frames: Vec::new(),
        strand_match: Vec::new(),
    };
    let (t0, first) = tracker.image_at(0.0)?;
    tracker.times.push(t0);
    tracker.frames.push(first.clone());
    let mut cur = first;
    let steps = source.frames.len() - 1;
    for k in 0..steps {
        cur = tracker.advance(cur, k as f64, (k + 1) as f64, 0)?;
    }
    Trajectory::new(tracker.times, tracker.frames, tracker.strand_match)
}

const AXIS_ANGLES: [f64; 6] = [0.0137, 0.0411, -0.0263, 0.0789, -0.0571, 0.1123];

/// The braid traced by a closed trajectory.
pub fn braid_from_trajectory(t: &Trajectory) -> Result<BraidWord, MonoError> {
    for theta in AXIS_ANGLES {
        match braid_with_axis(t, theta) {
            Err(MonoError::DegenerateProjection) => continue,
            other => return other,
        }
    }
    Err(MonoError::DegenerateProjection)
}

/// Strand indices sorted along the projection axis.
fn projection_order(u: &[f64]) -> Result<Vec<usize>, MonoError> {
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&a, &b| u[a].total_cmp(&u[b]));
    if order.windows(2).any(|w| u[w[0]] == u[w[1]]) {
        return Err(MonoError::DegenerateProjection);
    }
    Ok(order)
}

/// Reads crossings of strands projected to the axis `e^{iθ}`.
pub fn braid_with_axis(t: &Trajectory, theta: f64) -> Result<BraidWord, MonoError> {
    let n = t.strands();
    let rot = Complex64::from_polar(1.0, -theta);
    let paths: Vec<Vec<Complex64>> = t
        .strand_paths()
        .into_iter()
        .map(|p| p.into_iter().map(|z| z * rot).collect())
        .collect();
    let frames = paths.first().map_or(0, |p| p.len());
    if n < 2 {
        return Ok(BraidWord::identity(n.max(1)));
    }
    let u_at = |k: usize| -> Vec<f64> { paths.iter().map(|p| p[k].re).collect() };
    let mut order = projection_order(&u_at(0))?;
    let mut pos = vec![0; n];
    for (p, &s) in order.iter().enumerate() {
        pos[s] = p;
    }
    let mut letters = Vec::new();
    for k in 0..frames.saturating_sub(1) {
        let mut crossings: Vec<(f64, usize, usize)> = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let d0 = paths[a][k].re - paths[b][k].re;
                let d1 = paths[a][k + 1].re - paths[b][k + 1].re;
                if d0 == 0.0 || d1 == 0.0 {
                    if d0 != d1 {
                        return Err(MonoError::DegenerateProjection);
                    }
                    continue;
                }
                if (d0 < 0.0) != (d1 < 0.0) {
                    crossings.push((d0 / (d0 - d1), a, b));
                }
            }
        }
        crossings.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in crossings.windows(2) {
            let shares = w[0].1 == w[1].1 || w[0].1 == w[1].2 || w[0].2 == w[1].1 || w[0].2 == w[1].2;
            if (w[1].0 - w[0].0).abs() < 1e-12 && shares {
                return Err(MonoError::DegenerateProjection);
            }
        }
        for (s, a, b) in crossings {
            let (pa, pb) = (pos[a], pos[b]);
            if pa.abs_diff(pb) != 1 {
                return Err(MonoError::DegenerateProjection);
            }
            let (left, right) = if pa < pb { (a, b) } else { (b, a) };
            let v = |strand: usize| {
                let (z0, z1) = (paths[strand][k], paths[strand][k + 1]);
                z0.im + (z1.im - z0.im) * s
            };
            let (vl, vr) = (v(left), v(right));
            if vl == vr {
                return Err(MonoError::DegenerateProjection);
            }
            let p = pa.min(pb);
            letters.push(if vl < vr { p as i32 + 1 } else { -(p as i32 + 1) });
            order.swap(p, p + 1);
            pos[order[p]] = p;
            pos[order[p + 1]] = p + 1;
        }
    }
    Ok(BraidWord::new(n, letters)?)
}

/// Images of `σ1, …, σ(n-1)` under a map `Confₙℂ → Confₘℂ`, each traced
/// from the basepoint `{1, …, n}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedHom {
    pub hom: BraidHom,
    pub relations: HomCheck,
    pub exponent_sums: Vec<i64>,
    /// Whether each image's permutation matches its trajectory's endpoints.
    pub permutations_consistent: bool,
    pub frames_per_loop: Vec<usize>,
}

/// Permutation of projection positions induced by the endpoint matching.
fn trajectory_position_permutation(t: &Trajectory, theta: f64) -> Result<Vec<usize>, MonoError> {
    let rot = Complex64::from_polar(1.0, -theta);
    let u = |c: &Configuration| -> Vec<f64> { c.points().iter().map(|z| (z * rot).re).collect() };
    let first = projection_order(&u(&t.frames[0]))?;
    let last = projection_order(&u(t.frames.last().expect("nonempty")))?;
    let ends = t.endpoint_matching();
    let mut last_pos = vec![0; last.len()];
    for (p, &i) in last.iter().enumerate() {
        last_pos[i] = p;
    }
    Ok(first.iter().map(|&i| last_pos[ends[i]]).collect())
}

pub fn induced_hom<F>(map: &F, n: usize, m: usize, steps: usize, exec: Exec) -> Result<InducedHom, MonoError>
where
    F: Fn(&Configuration) -> Result<Configuration, ConfError> + Sync,
{
    let base = Configuration::from_real(&(1..=n).map(|j| j as f64).collect::<Vec<_>>())?;
    let image = map(&base)?;
    if image.len() != m {
        return Err(MonoError::WrongTarget {
            expected: m,
            found: image.len(),
        });
    }
    let traced = exec.map_range(n - 1, |k| -> Result<(BraidWord, bool, usize), MonoError> {
        let source = generator_loop(n, k + 1, steps)?;
        let t = track_map(map, &source, TrackOptions::default())?;
        let w = braid_from_trajectory(&t)?;
        let consistent = AXIS_ANGLES
            .iter()
            .find_map(|&th| trajectory_position_permutation(&t, th).ok())
            .is_some_and(|p| p == w.permutation());
        Ok((w, consistent, t.frames().len()))
    });
    let mut images = Vec::with_capacity(n - 1);
    let mut consistent = true;
    let mut frames_per_loop = Vec::with_capacity(n - 1);
    for r in traced {
        let (w, c, f) = r?;
        images.push(w);
        consistent &= c;
        frames_per_loop.push(f);
    }
    let hom = BraidHom::new(n, images)?;
    let relations = check_braid_homomorphism(&hom.images, true)?;
    Ok(InducedHom {
        exponent_sums: hom.images.iter().map(|w| w.exponent_sum()).collect(),
        hom,
        relations,
        permutations_consistent: consistent,
        frames_per_loop,
    })
}

impl InducedHom {
    /// A braid `h` of length at most `max_len` with `h·φ(σᵢ)·h⁻¹ = ψ(σᵢ)`.
    pub fn conjugator_to(&self, expected: &BraidHom, max_len: usize) -> Result<Option<BraidWord>, MonoError> {
        Ok(find_conjugator(&self.hom, expected, max_len)?)
    }
}

/// The resolving quartic `R: Conf₄ℂ → Conf₃ℂ`.
pub fn map_r(c: &Configuration) -> Result<Configuration, ConfError> {
    resolve_quartic(c)
}

/// `Ψ₃: Conf₃ℂ → Conf₄ℂ`.
pub fn map_psi3(c: &Configuration) -> Result<Configuration, ConfError> {
    psi_k(c, 3)
}

/// `Ψ₃ ∘ R: Conf₄ℂ → Conf₄ℂ`.
pub fn map_psi3_r(c: &Configuration) -> Result<Configuration, ConfError> {
    psi_k(&resolve_quartic(c)?, 3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_loop_shape() {
        let t = generator_loop(4, 2, 100).unwrap();
        let first = &t.frames()[0];
        let last = t.frames().last().unwrap();
        assert!(first.approx_eq_set(last, 1e-12));
        assert!(generator_loop(4, 4, 10).is_err());
        let min_sep = t
            .frames()
            .iter()
            .map(|c| c.separation())
            .fold(f64::INFINITY, f64::min);
        assert!(min_sep >= GENERATOR_LOOP_SEPARATION - 1e-12);
    }

    #[test]
    fn calibration() {
        for n in 2..=5 {
            for i in 1..n {
                let t = generator_loop(n, i, 200).unwrap();
                let w = braid_from_trajectory(&t).unwrap();
                assert_eq!(w.letters(), &[i as i32]);
                assert_eq!(
                    braid_from_trajectory(&t.reversed()).unwrap().letters(),
                    &[-(i as i32)]
                );
            }
        }
    }

    #[test]
    fn concatenation_concatenates_words() {
        let a = generator_loop(3, 1, 50).unwrap();
        let b = generator_loop(3, 2, 50).unwrap();
        let w = braid_from_trajectory(&a.concat(&b).unwrap()).unwrap();
        assert_eq!(w.letters(), &[1, 2]);
    }

    #[test]
    fn identity_and_constant_maps() {
        let l = generator_loop(3, 1, 100).unwrap();
        let id = |c: &Configuration| Ok(c.clone());
        let t = track_map(&id, &l, TrackOptions::default()).unwrap();
        assert_eq!(t.frames().len(), l.frames().len());
        assert_eq!(braid_from_trajectory(&t).unwrap().letters(), &[1]);
        let constant = |_: &Configuration| Configuration::from_real(&[0.0, 5.0]);
        let t = track_map(&constant, &l, TrackOptions::default()).unwrap();
        assert!(braid_from_trajectory(&t).unwrap().is_empty());
    }

    #[test]
    fn collision_is_reported() {
        let l = generator_loop(2, 1, 100).unwrap();
        // squaring identifies z and -z when the pair is symmetric about 0
        let shifted = |c: &Configuration| {
            let pts: Vec<Complex64> = c.points().iter().map(|z| (z - 1.5) * (z - 1.5)).collect();
            Ok(Configuration::from_trusted(pts))
        };
        assert!(matches!(
            track_map(&shifted, &l, TrackOptions::default()),
            Err(MonoError::Collision(_))
        ));
    }
}
