//! Decomposition of the pooled three-way transmission into within-group
//! contributions and a between-group residual:
//!
//! ```text
//! T = T0 + sum_G (n_G / N) * T_G
//! ```
//!
//! where T_G is the transmission computed over group G's own records and T0
//! is defined strictly as the residual, so the identity holds exactly by
//! construction. The geography axis inside the tensors must be strictly finer
//! than the grouping key (cities grouped into provinces or prefectures);
//! grouping by the geography axis itself is rejected because every group
//! would then have a constant geography axis.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{ContingencyTensor, InformationValue};
use crate::error::{Error, Result};

/// One record after classification: a group label (the coarser geographic
/// unit) plus the (geo, size, tech) category triple that enters the tensor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorizedRecord {
    pub group: String,
    pub geo: String,
    pub size: String,
    pub tech: String,
}

/// Assignment of records to groups. Every record belongs to exactly one
/// group and the union of the groups is the dataset; a group exists only if
/// it has members, so no group is ever reported with a zero count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPartition {
    groups: BTreeMap<String, Vec<usize>>,
}

impl GroupPartition {
    pub fn from_records(records: &[CategorizedRecord]) -> GroupPartition {
        let mut groups: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for (i, record) in records.iter().enumerate() {
            groups.entry(record.group.clone()).or_default().push(i);
        }
        GroupPartition { groups }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.groups.keys().map(String::as_str)
    }

    pub fn members(&self, label: &str) -> Option<&[usize]> {
        self.groups.get(label).map(Vec::as_slice)
    }
}

/// One group's weighted contribution to the pooled transmission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupContribution {
    pub label: String,
    pub n: u64,
    pub t_g: InformationValue,
    pub delta_t: InformationValue,
}

/// The full decomposition: pooled total, per-group contributions sorted by
/// ascending delta (largest synergy contribution first), and the residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynergyReport {
    pub total_t: InformationValue,
    pub n_total: u64,
    pub groups: Vec<GroupContribution>,
    pub sum_delta_t: InformationValue,
    pub t0: InformationValue,
    /// 100 * T0 / T, undefined when the total is zero.
    pub share_above_group: Option<f64>,
    pub filter_description: String,
}

/// (n_G / N) * T_G, the group's weighted contribution.
pub fn delta_contribution(
    n_g: u64,
    n_total: u64,
    t_g: InformationValue,
) -> Result<InformationValue> {
    if n_total == 0 {
        return Err(Error::EmptyDataset);
    }
    if n_g > n_total {
        return Err(Error::Validation(format!(
            "group size {n_g} exceeds total {n_total}"
        )));
    }
    Ok(t_g * (n_g as f64 / n_total as f64))
}

/// 100 * T0 / T as a percentage. Errors when the total is zero.
pub fn share_above_group(t0: InformationValue, total: InformationValue) -> Result<f64> {
    if total.bits() == 0.0 {
        return Err(Error::UndefinedShare);
    }
    Ok(100.0 * t0.bits() / total.bits())
}

/// Drop records whose group has fewer than `min_size` members, returning the
/// survivors and the number of dropped records. The default floor of 1 keeps
/// every group, however small.
pub fn apply_group_floor(
    records: Vec<CategorizedRecord>,
    min_size: u64,
) -> (Vec<CategorizedRecord>, u64) {
    if min_size <= 1 {
        return (records, 0);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for record in &records {
        *counts.entry(record.group.clone()).or_insert(0) += 1;
    }
    let before = records.len();
    let kept: Vec<CategorizedRecord> = records
        .into_iter()
        .filter(|r| counts[&r.group] >= min_size)
        .collect();
    let dropped = (before - kept.len()) as u64;
    (kept, dropped)
}

/// Decompose the pooled transmission over grouped records.
///
/// Per-group transmissions run in parallel; summation happens afterwards in
/// ascending label order, so the result does not depend on scheduling.
pub fn decompose(records: &[CategorizedRecord], filter_description: &str) -> Result<SynergyReport> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if records.iter().all(|r| r.group == r.geo) {
        return Err(Error::Config(
            "grouping key equals the geography axis; within-group geography would be constant, \
             so group transmissions are uninterpretable. Group at a coarser level than the \
             tensor's geography."
                .into(),
        ));
    }

    let pooled = ContingencyTensor::from_triples(
        records
            .iter()
            .map(|r| (r.geo.as_str(), r.size.as_str(), r.tech.as_str())),
    )?;
    let total_t = pooled.transmission3()?;
    let n_total = records.len() as u64;

    let partition = GroupPartition::from_records(records);
    let by_label: Vec<(&String, &Vec<usize>)> = partition.groups.iter().collect();
    let mut groups: Vec<GroupContribution> = by_label
        .par_iter()
        .map(|(label, members)| {
            let tensor = ContingencyTensor::from_triples(members.iter().map(|&i| {
                let r = &records[i];
                (r.geo.as_str(), r.size.as_str(), r.tech.as_str())
            }))?;
            let t_g = tensor.transmission3()?;
            let n = members.len() as u64;
            Ok(GroupContribution {
                label: (*label).clone(),
                n,
                t_g,
                delta_t: delta_contribution(n, n_total, t_g)?,
            })
        })
        .collect::<Result<_>>()?;

    let sum_delta_t =
        InformationValue::from_bits(groups.iter().map(|g| g.delta_t.bits()).sum());
    let t0 = total_t - sum_delta_t;
    let share = share_above_group(t0, total_t).ok();

    sort_by_contribution(&mut groups);
    Ok(SynergyReport {
        total_t,
        n_total,
        groups,
        sum_delta_t,
        t0,
        share_above_group: share,
        filter_description: filter_description.to_string(),
    })
}

/// Re-assemble a report from already-published per-group contributions
/// (label, n_G, delta_T), e.g. to recompute residuals from a table of
/// aggregates. T_G is derived back from delta via N / n_G.
pub fn assemble_report(
    total_t: InformationValue,
    contributions: &[(String, u64, InformationValue)],
    filter_description: &str,
) -> Result<SynergyReport> {
    if contributions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let n_total: u64 = contributions.iter().map(|(_, n, _)| n).sum();
    let mut groups: Vec<GroupContribution> = contributions
        .iter()
        .map(|(label, n, delta_t)| GroupContribution {
            label: label.clone(),
            n: *n,
            t_g: if *n > 0 {
                *delta_t * (n_total as f64 / *n as f64)
            } else {
                InformationValue::ZERO
            },
            delta_t: *delta_t,
        })
        .collect();
    let sum_delta_t =
        InformationValue::from_bits(groups.iter().map(|g| g.delta_t.bits()).sum());
    let t0 = total_t - sum_delta_t;
    let share = share_above_group(t0, total_t).ok();
    sort_by_contribution(&mut groups);
    Ok(SynergyReport {
        total_t,
        n_total,
        groups,
        sum_delta_t,
        t0,
        share_above_group: share,
        filter_description: filter_description.to_string(),
    })
}

/// Ascending delta (most negative first), ties broken by label.
fn sort_by_contribution(groups: &mut [GroupContribution]) {
    groups.sort_by(|a, b| {
        a.delta_t
            .bits()
            .partial_cmp(&b.delta_t.bits())
            .expect("transmissions are finite")
            .then_with(|| a.label.cmp(&b.label))
    });
}
