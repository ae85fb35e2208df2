//! Angular intervals on a circle and the interval overlay used to partition
//! circle boundaries into maximal arcs of constant covering set.

use std::f64::consts::TAU;

/// Normalize an angle into `[0, 2π)`.
pub fn normalize(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    // `-1e-20 % TAU` rounds to TAU itself.
    if t >= TAU {
        t = 0.0;
    }
    t
}

/// A counterclockwise arc `[start, start + width)` on the unit circle of angles.
///
/// `width == 2π` denotes the full circle. Storing (start, width) instead of
/// (lo, hi) keeps wrap-around arcs unambiguous.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularInterval {
    start: f64,
    width: f64,
}

impl AngularInterval {
    pub fn new(start: f64, width: f64) -> Self {
        assert!(
            (0.0..=TAU).contains(&width),
            "interval width {width} out of range"
        );
        Self {
            start: normalize(start),
            width,
        }
    }

    pub fn full() -> Self {
        Self {
            start: 0.0,
            width: TAU,
        }
    }

    /// Arc centered at `mid` spanning `half` to each side.
    pub fn centered(mid: f64, half: f64) -> Self {
        Self::new(mid - half, 2.0 * half)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    /// End angle, not normalized: always `start + width`.
    pub fn end(&self) -> f64 {
        self.start + self.width
    }

    pub fn midpoint(&self) -> f64 {
        normalize(self.start + 0.5 * self.width)
    }

    pub fn is_full(&self) -> bool {
        self.width >= TAU
    }

    pub fn contains(&self, theta: f64) -> bool {
        if self.is_full() {
            return true;
        }
        let d = normalize(theta - self.start);
        d < self.width
    }

    /// Offset of `theta` from `start`, measured counterclockwise in `[0, 2π)`.
    pub fn offset_of(&self, theta: f64) -> f64 {
        normalize(theta - self.start)
    }

    /// Clamp an angle to the closed interval, measuring along the arc.
    pub fn clamp(&self, theta: f64) -> f64 {
        if self.is_full() {
            return theta;
        }
        let d = normalize(theta - self.start);
        if d <= self.width {
            self.start + d
        } else {
            // Outside: snap to the nearer endpoint.
            let past_end = d - self.width;
            let before_start = TAU - d;
            if past_end < before_start {
                self.end()
            } else {
                self.start
            }
        }
    }
}

/// One elementary arc of an overlay: a maximal piece on which the set of
/// covering keys is constant.
#[derive(Debug, Clone)]
pub struct OverlayPiece {
    pub interval: AngularInterval,
    /// Sorted keys of the intervals covering this piece's interior.
    pub cover: Vec<usize>,
}

/// Overlay a family of keyed arcs on a circle.
///
/// Returns maximal pieces of constant cover, tiling the full circle. Pieces
/// are listed counterclockwise starting at the smallest breakpoint angle
/// (the canonical wrap). With no input arcs the result is a single uncovered
/// full-circle piece.
pub fn overlay(arcs: &[(usize, AngularInterval)]) -> Vec<OverlayPiece> {
    let mut full_keys: Vec<usize> = Vec::new();
    let mut breaks: Vec<f64> = Vec::new();
    for (key, iv) in arcs {
        if iv.is_full() {
            full_keys.push(*key);
        } else {
            breaks.push(iv.start());
            breaks.push(normalize(iv.end()));
        }
    }
    full_keys.sort_unstable();

    if breaks.is_empty() {
        return vec![OverlayPiece {
            interval: AngularInterval::full(),
            cover: full_keys,
        }];
    }

    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup();

    let n = breaks.len();
    let mut raw: Vec<OverlayPiece> = Vec::with_capacity(n);
    for i in 0..n {
        let start = breaks[i];
        let end = if i + 1 < n { breaks[i + 1] } else { breaks[0] + TAU };
        let width = end - start;
        if width <= 0.0 {
            continue;
        }
        let mid = normalize(start + 0.5 * width);
        let mut cover: Vec<usize> = full_keys.clone();
        for (key, iv) in arcs {
            if !iv.is_full() && iv.contains(mid) {
                cover.push(*key);
            }
        }
        cover.sort_unstable();
        cover.dedup();
        raw.push(OverlayPiece {
            interval: AngularInterval::new(start, width),
            cover,
        });
    }

    // Merge adjacent pieces with identical cover, including across the wrap.
    let mut merged: Vec<OverlayPiece> = Vec::with_capacity(raw.len());
    for piece in raw {
        match merged.last_mut() {
            Some(prev) if prev.cover == piece.cover => {
                let w = prev.interval.width() + piece.interval.width();
                prev.interval = AngularInterval::new(prev.interval.start(), w.min(TAU));
            }
            _ => merged.push(piece),
        }
    }
    if merged.len() > 1 {
        let first_cover = merged[0].cover.clone();
        let last = merged.last().unwrap();
        if last.cover == first_cover {
            let last = merged.pop().unwrap();
            let w = (last.interval.width() + merged[0].interval.width()).min(TAU);
            merged[0].interval = AngularInterval::new(last.interval.start(), w);
        }
    }
    merged
}

/// Total width of the pieces whose cover is empty, i.e. the uncovered measure.
pub fn uncovered_measure(pieces: &[OverlayPiece]) -> f64 {
    pieces
        .iter()
        .filter(|p| p.cover.is_empty())
        .map(|p| p.interval.width())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_wraps() {
        assert!((normalize(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert_eq!(normalize(0.0), 0.0);
        assert!(normalize(TAU) < 1e-15);
        assert!((normalize(3.0 * TAU + 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn contains_handles_wrap() {
        let iv = AngularInterval::centered(0.0, 0.5);
        assert!(iv.contains(0.4));
        assert!(iv.contains(TAU - 0.4));
        assert!(!iv.contains(0.6));
        assert!(!iv.contains(std::f64::consts::PI));
    }

    #[test]
    fn overlay_no_arcs_is_one_exterior_piece() {
        let pieces = overlay(&[]);
        assert_eq!(pieces.len(), 1);
        assert!(pieces[0].cover.is_empty());
        assert!(pieces[0].interval.is_full());
    }

    #[test]
    fn overlay_single_arc_two_pieces() {
        let iv = AngularInterval::centered(1.0, 0.7);
        let pieces = overlay(&[(5, iv)]);
        assert_eq!(pieces.len(), 2);
        let total: f64 = pieces.iter().map(|p| p.interval.width()).sum();
        assert!((total - TAU).abs() < 1e-12);
        let covered: f64 = pieces
            .iter()
            .filter(|p| p.cover == vec![5])
            .map(|p| p.interval.width())
            .sum();
        assert!((covered - 1.4).abs() < 1e-12);
    }

    #[test]
    fn overlay_two_overlapping_arcs() {
        let a = AngularInterval::new(0.0, 1.0);
        let b = AngularInterval::new(0.5, 1.0);
        let pieces = overlay(&[(1, a), (2, b)]);
        // Pieces: [0,0.5):{1}, [0.5,1.0):{1,2}, [1.0,1.5):{2}, rest exterior.
        assert_eq!(pieces.len(), 4);
        let both: Vec<_> = pieces.iter().filter(|p| p.cover == vec![1, 2]).collect();
        assert_eq!(both.len(), 1);
        assert!((both[0].interval.width() - 0.5).abs() < 1e-12);
        assert!((uncovered_measure(&pieces) - (TAU - 1.5)).abs() < 1e-12);
    }

    #[test]
    fn overlay_full_cover_key() {
        let pieces = overlay(&[(3, AngularInterval::full()), (1, AngularInterval::new(0.0, 1.0))]);
        for p in &pieces {
            assert!(p.cover.contains(&3));
        }
        assert_eq!(uncovered_measure(&pieces), 0.0);
    }

    #[test]
    fn clamp_snaps_outside_angles() {
        let iv = AngularInterval::new(1.0, 1.0);
        assert!((iv.clamp(1.5) - 1.5).abs() < 1e-15);
        assert!((normalize(iv.clamp(2.3)) - 2.0).abs() < 1e-12);
        assert!((normalize(iv.clamp(0.9)) - 1.0).abs() < 1e-12);
    }
}
