//! File formats: instance JSON, family manifests, and JSON views of the
//! report types. All counts are emitted as decimal strings since they
//! routinely exceed 64 bits.

use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::conjecture::ScanReport;
use crate::error::{Error, Result};
use crate::estimator::{Certificate, EstimateReport, SieveReport, Verdict};
use crate::model::{IdentityReport, PartitionInstance};

pub const SCHEMA_VERSION: u32 = 1;

/// The shared on-disk instance format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    /// Decimal strings, to permit values beyond 64 bits.
    pub numbers: Vec<String>,
    pub radix: Option<u32>,
    pub source: String,
}

impl InstanceFile {
    pub fn from_instance(inst: &PartitionInstance, radix: Option<u32>, source: &str) -> Self {
        Self {
            numbers: inst.numbers().iter().map(|x| x.to_string()).collect(),
            radix,
            source: source.to_string(),
        }
    }

    pub fn to_instance(&self) -> Result<PartitionInstance> {
        let numbers = self
            .numbers
            .iter()
            .map(|s| {
                s.parse::<BigUint>()
                    .map_err(|_| Error::BadInstanceFile(format!("bad number '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        PartitionInstance::new(numbers)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestMember {
    pub file: String,
    pub radix: u32,
}

/// Index of the instance files a reduction emitted for one formula.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyManifest {
    pub schema_version: u32,
    pub source_cnf: String,
    pub variant: String,
    /// How zero-partition counts of the members relate to the formula.
    pub count_relation: String,
    pub members: Vec<ManifestMember>,
}

impl FamilyManifest {
    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }
}

pub fn identity_report_json(report: &IdentityReport) -> Value {
    json!({
        "zero": report.zero.to_string(),
        "doubled": report.doubled.to_string(),
        "appended": report.appended.to_string(),
        "removed": report.removed.to_string(),
        "corrected_identity": "appended = doubled + 2*removed",
        "corrected_holds": report.corrected_holds,
        "naive_identity": "zero = doubled + appended",
        "naive_holds": report.naive_holds,
    })
}

pub fn sieve_report_json(report: &SieveReport) -> Value {
    let cells: Vec<Value> = report
        .cells
        .iter()
        .map(|cell| {
            json!({
                "instance": cell.instance_index,
                "prime": cell.prime,
                "counts": cell.counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let certificates: Vec<Value> = report
        .certificates
        .iter()
        .map(|cert| match cert {
            Certificate::ZeroClassEmpty {
                instance_index,
                prime,
            } => json!({
                "kind": "zero_class_empty",
                "instance": instance_index,
                "prime": prime,
            }),
            Certificate::FullNonzeroClass {
                instance_index,
                prime,
                remainder,
            } => json!({
                "kind": "full_nonzero_class",
                "instance": instance_index,
                "prime": prime,
                "remainder": remainder,
            }),
        })
        .collect();
    let confidence = report.heuristic_confidence.map(|c| {
        json!({
            "label": "heuristic",
            "product_form": c.product_form,
            "exponential_bound": c.exponential_bound,
            "reductions": c.reductions,
        })
    });
    json!({
        "cells": cells,
        "certificates": certificates,
        "zero_partition_upper_bound": report.upper_bound.to_string(),
        "heuristic_confidence": confidence,
    })
}

pub fn estimate_report_json(report: &EstimateReport) -> Value {
    json!({
        "verdict": match report.verdict {
            Verdict::UnsatCertified => "unsat_certified",
            Verdict::Unknown => "unknown",
        },
        "sat_upper_bound": report.sat_upper_bound.to_string(),
        "radices": report.radices,
        "sieve": sieve_report_json(&report.sieve),
    })
}

pub fn scan_report_json(report: &ScanReport) -> Value {
    json!({
        "n_range": [report.n_range.0, report.n_range.1],
        "element_bound": report.element_bound,
        "instances_checked": report.instances_checked,
        "max_ratio": report.max_ratio,
        "witness": report.witness,
        "counterexamples": report.counterexamples.iter().map(|c| json!({
            "numbers": c.numbers,
            "zero_count": c.zero_count.to_string(),
            "bound": c.bound.to_string(),
        })).collect::<Vec<_>>(),
        "partial": report.partial,
    })
}
