//! 8-connected component labeling of binary masks via two-pass union-find.
//!
//! Labels are compacted in first-encounter raster order, so the labeling is
//! a pure function of the mask: identical masks always produce identical
//! label maps, matching what a raster-order flood fill would assign.

use crate::image::BinaryMap;

/// Component labeling of a binary mask. Label 0 is background; foreground
/// components are numbered `1..=count` in the order their first pixel
/// appears in a row-major scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Labeling {
    width: usize,
    height: usize,
    labels: Vec<u32>,
    areas: Vec<usize>,
}

impl Labeling {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of foreground components.
    pub fn count(&self) -> usize {
        self.areas.len()
    }

    /// Row-major label map; 0 = background.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label_at(&self, x: usize, y: usize) -> u32 {
        self.labels[y * self.width + x]
    }

    /// Pixel count per component, indexed by `label - 1`.
    pub fn areas(&self) -> &[usize] {
        &self.areas
    }

    /// Tight bounding box `(x0, y0, x1, y1)` (inclusive) per component,
    /// indexed by `label - 1`.
    pub fn component_boxes(&self) -> Vec<(usize, usize, usize, usize)> {
        let mut boxes = vec![(usize::MAX, usize::MAX, 0usize, 0usize); self.count()];
        for y in 0..self.height {
            for x in 0..self.width {
                let label = self.labels[y * self.width + x];
                if label == 0 {
                    continue;
                }
                let b = &mut boxes[(label - 1) as usize];
                b.0 = b.0.min(x);
                b.1 = b.1.min(y);
                b.2 = b.2.max(x);
                b.3 = b.3.max(y);
            }
        }
        boxes
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new() -> Self {
        Self { parent: vec![0] } // slot 0 reserved for background
    }

    fn make_set(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // root at the smaller id so provisional roots stay raster-ordered
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Label the 8-connected components of `mask`.
pub fn label_components(mask: &BinaryMap) -> Labeling {
    let (w, h) = (mask.width(), mask.height());
    let mut provisional = vec![0u32; w * h];
    let mut uf = UnionFind::new();

    // first pass: provisional labels from the four already-visited neighbors
    for y in 0..h {
        for x in 0..w {
            if !mask.get(x, y) {
                continue;
            }
            let mut assigned = 0u32;
            let consider = |px: usize, py: usize, uf: &mut UnionFind, assigned: &mut u32| {
                let neighbor = provisional[py * w + px];
                if neighbor == 0 {
                    return;
                }
                if *assigned == 0 {
                    *assigned = neighbor;
                } else {
                    uf.union(*assigned, neighbor);
                }
            };
            if x > 0 {
                consider(x - 1, y, &mut uf, &mut assigned);
            }
            if y > 0 {
                if x > 0 {
                    consider(x - 1, y - 1, &mut uf, &mut assigned);
                }
                consider(x, y - 1, &mut uf, &mut assigned);
                if x + 1 < w {
                    consider(x + 1, y - 1, &mut uf, &mut assigned);
                }
            }
            if assigned == 0 {
                assigned = uf.make_set();
            }
            provisional[y * w + x] = assigned;
        }
    }

    // second pass: resolve roots and compact in first-encounter order
    let mut compact_of_root = vec![0u32; uf.parent.len()];
    let mut labels = vec![0u32; w * h];
    let mut areas: Vec<usize> = Vec::new();
    for i in 0..w * h {
        let p = provisional[i];
        if p == 0 {
            continue;
        }
        let root = uf.find(p);
        let mut compact = compact_of_root[root as usize];
        if compact == 0 {
            areas.push(0);
            compact = areas.len() as u32;
            compact_of_root[root as usize] = compact;
        }
        labels[i] = compact;
        areas[(compact - 1) as usize] += 1;
    }

    Labeling {
        width: w,
        height: h,
        labels,
        areas,
    }
}
