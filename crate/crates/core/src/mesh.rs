//! Partition of the artificial-time interval `[0, 1]` into elements.

use crate::error::{Error, Result};

/// Element nodes plus the affine map `tau = q t - p` for each element,
/// sending `[t_e, t_{e+1}]` onto `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeMesh {
    nodes: Vec<f64>,
    scales: Vec<f64>,
    shifts: Vec<f64>,
}

impl TimeMesh {
    /// `num_elements` equal-width elements.
    pub fn uniform(num_elements: usize) -> Result<Self> {
        if num_elements < 1 {
            return Err(Error::invalid("num_elements", "at least one element is required"));
        }
        let e = num_elements as f64;
        let mut nodes: Vec<f64> = (0..num_elements).map(|i| i as f64 / e).collect();
        nodes.push(1.0);
        Ok(TimeMesh {
            nodes,
            scales: vec![2.0 * e; num_elements],
            shifts: (0..num_elements).map(|i| (2 * i + 1) as f64).collect(),
        })
    }

    /// A mesh from explicit nodes: strictly increasing, from 0 to 1.
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::invalid("nodes", "need at least two nodes"));
        }
        if nodes[0] != 0.0 || nodes[nodes.len() - 1] != 1.0 {
            return Err(Error::invalid("nodes", "mesh must start at 0 and end at 1"));
        }
        if let Some(w) = nodes.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "nodes",
                format!("nodes must be strictly increasing (index {})", w + 1),
            ));
        }
        let (scales, shifts) = nodes
            .windows(2)
            .map(|w| {
                let width = w[1] - w[0];
                (2.0 / width, (w[1] + w[0]) / width)
            })
            .unzip();
        Ok(TimeMesh {
            nodes,
            scales,
            shifts,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.scales.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// `(t_e, t_{e+1})`.
    pub fn element_bounds(&self, element: usize) -> (f64, f64) {
        (self.nodes[element], self.nodes[element + 1])
    }

    pub fn width(&self, element: usize) -> f64 {
        self.nodes[element + 1] - self.nodes[element]
    }

    /// `q_e = 2 / (t_{e+1} - t_e)`.
    pub fn scale(&self, element: usize) -> f64 {
        self.scales[element]
    }

    /// `p_e = (t_{e+1} + t_e) / (t_{e+1} - t_e)`.
    pub fn shift(&self, element: usize) -> f64 {
        self.shifts[element]
    }

    /// `q_e t - p_e`, evaluated as `((t - t_e) - (t_{e+1} - t)) / (t_{e+1} - t_e)`
    /// so the element's own nodes land on -1 and +1 exactly.
    pub fn local_time(&self, element: usize, t: f64) -> f64 {
        let (lo, hi) = self.element_bounds(element);
        ((t - lo) - (hi - t)) / (hi - lo)
    }

    /// `Some(q)` when every element shares the same scale.
    pub fn common_scale(&self) -> Option<f64> {
        let first = self.scales[0];
        self.scales.iter().all(|&q| q == first).then_some(first)
    }
}

/// Free-function form of [`TimeMesh::uniform`].
pub fn uniform_mesh(num_elements: usize) -> Result<TimeMesh> {
    TimeMesh::uniform(num_elements)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_element() {
        let m = uniform_mesh(1).unwrap();
        assert_eq!(m.nodes(), &[0.0, 1.0]);
        assert_eq!((m.scale(0), m.shift(0)), (2.0, 1.0));
    }

    #[test]
    fn two_elements() {
        let m = uniform_mesh(2).unwrap();
        assert_eq!(m.nodes(), &[0.0, 0.5, 1.0]);
        assert_eq!([m.scale(0), m.scale(1)], [4.0, 4.0]);
        assert_eq!([m.shift(0), m.shift(1)], [1.0, 3.0]);
    }

    #[test]
    fn eight_elements() {
        let m = uniform_mesh(8).unwrap();
        assert_eq!(m.nodes().len(), 9);
        assert!((0..8).all(|e| m.scale(e) == 16.0));
        assert_eq!(m.common_scale(), Some(16.0));
    }

    #[test]
    fn rejects_zero_elements() {
        assert!(uniform_mesh(0).is_err());
    }

    #[test]
    fn local_time_round_trip() {
        for count in 1..=1024 {
            let m = uniform_mesh(count).unwrap();
            for e in 0..count {
                let (a, b) = m.element_bounds(e);
                assert!((m.local_time(e, a) + 1.0).abs() <= 1e-15, "E={count} e={e}");
                assert!((m.local_time(e, b) - 1.0).abs() <= 1e-15, "E={count} e={e}");
            }
        }
    }

    #[test]
    fn local_time_agrees_with_affine_form() {
        let m = uniform_mesh(7).unwrap();
        for e in 0..7 {
            for t in [0.0, 0.13, 0.5, 0.77, 1.0] {
                let affine = m.scale(e) * t - m.shift(e);
                assert!((m.local_time(e, t) - affine).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn widths_sum_to_one() {
        for count in [1, 3, 8, 100] {
            let m = uniform_mesh(count).unwrap();
            let total: f64 = (0..count).map(|e| m.width(e)).sum();
            assert!((total - 1.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn explicit_nodes() {
        let m = TimeMesh::from_nodes(vec![0.0, 0.25, 1.0]).unwrap();
        assert_eq!(m.scale(0), 8.0);
        assert_eq!(m.local_time(1, 0.25), -1.0);
        assert_eq!(m.local_time(1, 1.0), 1.0);
        assert!((m.scale(1) * 1.0 - m.shift(1) - 1.0).abs() < 1e-15);
        assert_eq!(m.common_scale(), None);
        assert!(TimeMesh::from_nodes(vec![0.0, 0.5, 0.5, 1.0]).is_err());
        assert!(TimeMesh::from_nodes(vec![0.1, 1.0]).is_err());
    }
}
