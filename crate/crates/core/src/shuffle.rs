//! The color shuffle between three-colored partial orders and digraphs.
//!
//! Same-color pairs keep the order as an arc: x->y iff x<y. For x of color i
//! and y of color i+1 (mod 3) the three order states are rotated:
//! x->y iff x>y, x<-y iff x⊥y, x⊥y iff x<y. The map is invertible pair by
//! pair once the coloring is known.

use crate::error::Error;
use crate::structures::{ColoredPoset, Digraph, Poset, VertexId};
use std::collections::BTreeMap;

pub fn shuffle3(cp: &ColoredPoset) -> Digraph {
    let n = cp.n();
    let mut g = Digraph::new(cp.ids().to_vec()).unwrap();
    for i in 0..n {
        for j in (i + 1)..n {
            let (ci, cj) = (cp.color_pos(i), cp.color_pos(j));
            let lt_ij = cp.poset.lt_pos(i, j);
            let lt_ji = cp.poset.lt_pos(j, i);
            if ci == cj {
                if lt_ij {
                    g.set_arc_pos(i, j, true);
                } else if lt_ji {
                    g.set_arc_pos(j, i, true);
                }
            } else if cj == (ci + 1) % 3 {
                // x = i in P_c, y = j in P_{c+1}
                if lt_ji {
                    g.set_arc_pos(i, j, true); // x > y
                } else if !lt_ij {
                    g.set_arc_pos(j, i, true); // x ⊥ y
                } // x < y stays incomparable
            } else {
                // x = j in P_c, y = i in P_{c+1}
                if lt_ij {
                    g.set_arc_pos(j, i, true);
                } else if !lt_ji {
                    g.set_arc_pos(i, j, true);
                }
            }
        }
    }
    g
}

/// Inverts the shuffle for a digraph known to carry a shuffle coloring.
/// Fails when the pairwise inverse image is not a partial order.
pub fn unshuffle3(g: &Digraph, colors: &BTreeMap<VertexId, u8>) -> Result<ColoredPoset, Error> {
    let n = g.n();
    let mut color_vec = Vec::with_capacity(n);
    for &v in g.ids() {
        let c = *colors
            .get(&v)
            .ok_or_else(|| Error::InvalidInput(format!("vertex {v} missing a color")))?;
        if c > 2 {
            return Err(Error::InvalidInput(format!(
                "vertex {v} has color {c} outside 0..3"
            )));
        }
        color_vec.push(c);
    }
    let mut lt: Vec<(usize, usize)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (ci, cj) = (color_vec[i], color_vec[j]);
            let arc_ij = g.arc_pos(i, j);
            let arc_ji = g.arc_pos(j, i);
            if ci == cj {
                if arc_ij {
                    lt.push((i, j));
                } else if arc_ji {
                    lt.push((j, i));
                }
            } else if cj == (ci + 1) % 3 {
                if arc_ij {
                    lt.push((j, i));
                } else if !arc_ji {
                    lt.push((i, j));
                }
            } else if arc_ji {
                lt.push((i, j));
            } else if !arc_ij {
                lt.push((j, i));
            }
        }
    }
    let mut matrix = crate::structures::bitmat::BitMatrix::new(n);
    for (i, j) in lt {
        matrix.set(i, j, true);
    }
    let poset = Poset::from_matrix(g.ids().to_vec(), matrix)?;
    let report = poset.validate();
    if !report.pass() {
        return Err(Error::NotAShuffle(report.to_string()));
    }
    ColoredPoset::new(poset, color_vec)
}
