use std::collections::HashMap;

use crate::entropy::InformationValue;
use crate::error::{Error, Result};

/// One axis of the three-dimensional contingency tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Geography (finest available level, normally the city).
    Geo,
    /// Organization, measured as a firm-size class.
    Org,
    /// Technology, measured as a truncated industry code.
    Tech,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Geo, Axis::Org, Axis::Tech];

    fn position(self) -> usize {
        match self {
            Axis::Geo => 0,
            Axis::Org => 1,
            Axis::Tech => 2,
        }
    }
}

/// The ordered category labels of one axis.
///
/// Labels are unique and the label <-> index mapping is stable for the life
/// of the codebook.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    axis_name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Codebook {
    pub fn new(axis_name: impl Into<String>, labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Validation("codebook needs at least one label".into()));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::Validation("empty category label".into()));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::Validation(format!("duplicate category label {label:?}")));
            }
        }
        Ok(Codebook {
            axis_name: axis_name.into(),
            labels,
            index,
        })
    }

    pub fn axis_name(&self) -> &str {
        &self.axis_name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.labels.get(index).map(String::as_str)
    }
}

/// Integer counts over (geography x size x technology) categories.
///
/// Cells are stored in lexicographic order (geo-major), and every summation
/// over cells walks that order, so identical tensors always produce
/// bit-identical entropies.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTensor {
    codebooks: [Codebook; 3],
    counts: Vec<u64>,
    total: u64,
}

impl ContingencyTensor {
    /// Build a tensor from categorized (geo, org, tech) triples.
    ///
    /// Codebooks hold exactly the observed labels in first-seen order;
    /// counts reflect multiplicity; total equals the number of triples.
    pub fn from_triples<'a, I>(triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str)>,
    {
        let triples: Vec<(&str, &str, &str)> = triples.into_iter().collect();
        if triples.is_empty() {
            return Err(Error::EmptyDataset);
        }

        let mut labels: [Vec<String>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        let mut seen: [HashMap<&str, usize>; 3] =
            [HashMap::new(), HashMap::new(), HashMap::new()];
        let mut cells = Vec::with_capacity(triples.len());
        for &(g, o, t) in &triples {
            let mut cell = [0usize; 3];
            for (axis, raw) in [g, o, t].into_iter().enumerate() {
                if raw.is_empty() {
                    return Err(Error::Validation("empty category label in triple".into()));
                }
                let next = labels[axis].len();
                let idx = *seen[axis].entry(raw).or_insert_with(|| {
                    labels[axis].push(raw.to_string());
                    next
                });
                cell[axis] = idx;
            }
            cells.push(cell);
        }

        let [g_labels, o_labels, t_labels] = labels;
        let codebooks = [
            Codebook::new("geography", g_labels)?,
            Codebook::new("size", o_labels)?,
            Codebook::new("technology", t_labels)?,
        ];
        let dims = [codebooks[0].len(), codebooks[1].len(), codebooks[2].len()];
        let mut counts = vec![0u64; dims[0] * dims[1] * dims[2]];
        for [g, o, t] in cells {
            counts[(g * dims[1] + o) * dims[2] + t] += 1;
        }
        Ok(ContingencyTensor {
            codebooks,
            total: triples.len() as u64,
            counts,
        })
    }

    /// Assemble a tensor from explicit codebooks and a geo-major count array.
    pub fn from_parts(codebooks: [Codebook; 3], counts: Vec<u64>) -> Result<Self> {
        let expected = codebooks[0].len() * codebooks[1].len() * codebooks[2].len();
        if counts.len() != expected {
            return Err(Error::Validation(format!(
                "count array has {} cells, codebooks imply {expected}",
                counts.len()
            )));
        }
        let total = counts.iter().sum();
        Ok(ContingencyTensor {
            codebooks,
            counts,
            total,
        })
    }

    pub fn codebook(&self, axis: Axis) -> &Codebook {
        &self.codebooks[axis.position()]
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (
            self.codebooks[0].len(),
            self.codebooks[1].len(),
            self.codebooks[2].len(),
        )
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, geo: usize, org: usize, tech: usize) -> u64 {
        let (_, no, nt) = self.dims();
        self.counts[(geo * no + org) * nt + tech]
    }

    /// Marginal entropy over a non-empty subset of axes.
    ///
    /// Counts are first marginalized onto the selected axes, then normalized
    /// by the tensor total.
    pub fn joint_entropy(&self, axes: &[Axis]) -> Result<InformationValue> {
        if self.total == 0 {
            return Err(Error::EmptyDataset);
        }
        if axes.is_empty() {
            return Err(Error::Validation("no axes selected".into()));
        }
        let mut selected = [false; 3];
        for &axis in axes {
            if selected[axis.position()] {
                return Err(Error::Validation("axis selected twice".into()));
            }
            selected[axis.position()] = true;
        }
        let (ng, no, nt) = self.dims();
        let strides = [
            if selected[0] { no_zero(no, selected[1]) * no_zero(nt, selected[2]) } else { 0 },
            if selected[1] { no_zero(nt, selected[2]) } else { 0 },
            if selected[2] { 1 } else { 0 },
        ];
        let size = no_zero(ng, selected[0]) * no_zero(no, selected[1]) * no_zero(nt, selected[2]);
        let mut marginal = vec![0u64; size];
        let mut cell = 0usize;
        for g in 0..ng {
            for o in 0..no {
                for t in 0..nt {
                    marginal[g * strides[0] + o * strides[1] + t * strides[2]] +=
                        self.counts[cell];
                    cell += 1;
                }
            }
        }
        Ok(InformationValue::from_bits(plogp_sum(&marginal, self.total)))
    }

    /// Mutual information (transmission) between two axes:
    /// T_AB = H_A + H_B - H_AB. Non-negative up to rounding.
    pub fn transmission2(&self, pair: (Axis, Axis)) -> Result<InformationValue> {
        let (a, b) = pair;
        if a == b {
            return Err(Error::Validation("transmission needs two distinct axes".into()));
        }
        let h_a = self.joint_entropy(&[a])?;
        let h_b = self.joint_entropy(&[b])?;
        let h_ab = self.joint_entropy(&[a, b])?;
        let t = h_a + h_b - h_ab;
        debug_assert!(t.bits() >= -1e-12);
        Ok(t)
    }

    /// Signed three-way transmission:
    /// T_GOT = H_G + H_O + H_T - H_GO - H_GT - H_OT + H_GOT.
    ///
    /// Negative values indicate synergy (a reduction of uncertainty at the
    /// level of the three-way configuration); positive values redundancy.
    pub fn transmission3(&self) -> Result<InformationValue> {
        let h_g = self.joint_entropy(&[Axis::Geo])?;
        let h_o = self.joint_entropy(&[Axis::Org])?;
        let h_t = self.joint_entropy(&[Axis::Tech])?;
        let h_go = self.joint_entropy(&[Axis::Geo, Axis::Org])?;
        let h_gt = self.joint_entropy(&[Axis::Geo, Axis::Tech])?;
        let h_ot = self.joint_entropy(&[Axis::Org, Axis::Tech])?;
        let h_got = self.joint_entropy(&[Axis::Geo, Axis::Org, Axis::Tech])?;
        Ok(h_g + h_o + h_t - h_go - h_gt - h_ot + h_got)
    }

    /// Expected within-slice transmission of `pair`, conditioned on the third
    /// axis: sum_z p(z) * T_AB(z). Always >= 0 up to rounding.
    ///
    /// Satisfies T_GOT = T_AB - T_AB|C for every assignment of axes.
    pub fn conditional_transmission2(
        &self,
        pair: (Axis, Axis),
        given: Axis,
    ) -> Result<InformationValue> {
        if self.total == 0 {
            return Err(Error::EmptyDataset);
        }
        let (a, b) = pair;
        if a == b || a == given || b == given {
            return Err(Error::Validation("axes must be distinct".into()));
        }
        let (ng, no, nt) = self.dims();
        let dims = [ng, no, nt];
        let (na, nb, nc) = (
            dims[a.position()],
            dims[b.position()],
            dims[given.position()],
        );

        let mut weighted = 0.0;
        for c in 0..nc {
            let mut slice = vec![0u64; na * nb];
            let mut slice_total = 0u64;
            for g in 0..ng {
                for o in 0..no {
                    for t in 0..nt {
                        let by_axis = [g, o, t];
                        if by_axis[given.position()] != c {
                            continue;
                        }
                        let count = self.counts[(g * no + o) * nt + t];
                        slice[by_axis[a.position()] * nb + by_axis[b.position()]] += count;
                        slice_total += count;
                    }
                }
            }
            if slice_total == 0 {
                continue;
            }
            let mut row = vec![0u64; na];
            let mut col = vec![0u64; nb];
            for i in 0..na {
                for j in 0..nb {
                    row[i] += slice[i * nb + j];
                    col[j] += slice[i * nb + j];
                }
            }
            let t_slice = plogp_sum(&row, slice_total) + plogp_sum(&col, slice_total)
                - plogp_sum(&slice, slice_total);
            weighted += (slice_total as f64 / self.total as f64) * t_slice;
        }
        debug_assert!(weighted >= -1e-12);
        Ok(InformationValue::from_bits(weighted))
    }
}

fn no_zero(n: usize, selected: bool) -> usize {
    if selected {
        n
    } else {
        1
    }
}

/// -sum p log2 p over counts normalized by `total`, in index order.
fn plogp_sum(counts: &[u64], total: u64) -> f64 {
    let n = total as f64;
    let mut h = 0.0;
    for &c in counts {
        if c > 0 {
            let p = c as f64 / n;
            h -= p * p.log2();
        }
    }
    h
}
