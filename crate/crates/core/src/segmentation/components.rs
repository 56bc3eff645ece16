//! Connected-component extraction on binary masks.

use super::SegmentMask;

/// One 8-connected foreground region.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Raster-scan discovery order, starting at 0.
    pub label: usize,
    /// Linear pixel indices (`y * width + x`), ascending.
    pub pixels: Vec<usize>,
    /// Tight bounding box as `(min_x, min_y, max_x, max_y)`, inclusive.
    pub bbox: (usize, usize, usize, usize),
}

impl Segment {
    pub fn area(&self) -> usize {
        self.pixels.len()
    }

    /// Bounding-box height in pixels.
    pub fn box_height(&self) -> usize {
        self.bbox.3 - self.bbox.1 + 1
    }

    /// Bounding-box width in pixels.
    pub fn box_width(&self) -> usize {
        self.bbox.2 - self.bbox.0 + 1
    }
}

/// Label 8-connected foreground components in raster-scan discovery order.
/// An empty mask yields an empty vector.
pub fn extract_segments(mask: &SegmentMask) -> Vec<Segment> {
    let (w, h) = (mask.width(), mask.height());
    let mut labels: Vec<Option<usize>> = vec![None; w * h];
    let mut segments = Vec::new();
    let mut stack = Vec::new();

    for start in 0..w * h {
        if !mask.bits()[start] || labels[start].is_some() {
            continue;
        }
        let label = segments.len();
        labels[start] = Some(label);
        stack.push(start);
        let mut pixels = Vec::new();
        let mut bbox = (w, h, 0usize, 0usize);

        while let Some(idx) = stack.pop() {
            pixels.push(idx);
            let (x, y) = (idx % w, idx / w);
            bbox.0 = bbox.0.min(x);
            bbox.1 = bbox.1.min(y);
            bbox.2 = bbox.2.max(x);
            bbox.3 = bbox.3.max(y);

            let x_lo = x.saturating_sub(1);
            let x_hi = (x + 1).min(w - 1);
            let y_lo = y.saturating_sub(1);
            let y_hi = (y + 1).min(h - 1);
            for ny in y_lo..=y_hi {
                for nx in x_lo..=x_hi {
                    let nidx = ny * w + nx;
                    if mask.bits()[nidx] && labels[nidx].is_none() {
                        labels[nidx] = Some(label);
                        stack.push(nidx);
                    }
                }
            }
        }
        pixels.sort_unstable();
        segments.push(Segment { label, pixels, bbox });
    }
    segments
}
