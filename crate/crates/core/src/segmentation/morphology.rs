//! Hole filling on binary masks.

use super::SegmentMask;

/// Fill background holes: zero regions (4-connected) that cannot reach the
/// image border become foreground; set bits are never cleared.
pub fn fill_holes(mask: &SegmentMask) -> SegmentMask {
    let (w, h) = (mask.width(), mask.height());
    let mut reachable = vec![false; w * h];
    let mut stack = Vec::new();

    let seed = |x: usize, y: usize, stack: &mut Vec<(usize, usize)>, reachable: &mut Vec<bool>| {
        if !mask.get(x, y) && !reachable[y * w + x] {
            reachable[y * w + x] = true;
            stack.push((x, y));
        }
    };
    for x in 0..w {
        seed(x, 0, &mut stack, &mut reachable);
        seed(x, h - 1, &mut stack, &mut reachable);
    }
    for y in 0..h {
        seed(0, y, &mut stack, &mut reachable);
        seed(w - 1, y, &mut stack, &mut reachable);
    }

    while let Some((x, y)) = stack.pop() {
        let mut visit = |nx: usize, ny: usize| {
            let idx = ny * w + nx;
            if !mask.get(nx, ny) && !reachable[idx] {
                reachable[idx] = true;
                stack.push((nx, ny));
            }
        };
        if x > 0 {
            visit(x - 1, y);
        }
        if x + 1 < w {
            visit(x + 1, y);
        }
        if y > 0 {
            visit(x, y - 1);
        }
        if y + 1 < h {
            visit(x, y + 1);
        }
    }

    let bits = (0..w * h)
        .map(|i| mask.bits()[i] || !reachable[i])
        .collect();
    SegmentMask::new(w, h, bits, mask.threshold()).expect("dimensions preserved")
}
