//! Reference examples with expectations recomputed from brute-force prefixes.

mod family;

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use family::{
    default_r_list, family_f_equation, family_h_equation, first_order_relation, independence_check,
    matrix_product_h, no_becker_multiple_probe, paradox_family, Family, IndependenceBounds,
    IndependenceReport, ProbeItem, ProbeReport,
};

use crate::algebra::Poly;
use crate::becker::{certify_irregular, certify_regular, normalize, BeckerNormalization, Verdict};
use crate::error::{Error, Result};
use crate::json::to_canonical;
use crate::mahler::{verify, MahlerEquation};
use crate::regular::{closure_rep, ClosureCaps, ClosureOutcome};
use crate::series::{oracle, LaurentSeries};

pub const ITEM_NAMES: [&str; 5] = ["thue_morse", "stern", "binary_partitions", "family_k2", "worked_example"];

/// Prefix length stored for each item.
pub const PREFIX_ORDER: usize = 256;

const CLOSURE_CAPS: ClosureCaps = ClosureCaps {
    max_dim: 12,
    max_depth: 12,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub verdict: Verdict,
    /// Dimension of the Cartier closure, `None` when the caps were hit.
    pub closure_dim: Option<usize>,
    pub normalization: BeckerNormalization,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusItem {
    pub name: String,
    pub k: usize,
    pub equation: MahlerEquation,
    pub prefix: LaurentSeries,
    pub expected: Expected,
}

fn source(name: &str) -> Result<(MahlerEquation, LaurentSeries)> {
    let n = PREFIX_ORDER;
    Ok(match name {
        "thue_morse" => (MahlerEquation::from_ints(2, &[&[1], &[-1, 1]]), oracle::thue_morse(n)),
        "stern" => (MahlerEquation::from_ints(2, &[&[1], &[-1, -1, -1]]), oracle::stern(n)),
        "binary_partitions" => (
            MahlerEquation::from_ints(2, &[&[1, -1], &[-1]]),
            oracle::binary_partitions(n),
        ),
        "family_k2" => (family_f_equation(2), paradox_family(2, n)?.f.truncate(n as i64)),
        "worked_example" => (
            MahlerEquation::from_ints(2, &[&[1, 1], &[-1]]),
            LaurentSeries::from_poly(&Poly::from_ints(&[1, -1]), n as i64),
        ),
        _ => return Err(Error::InvalidArgument(format!("unknown corpus item {name:?}"))),
    })
}

fn verdict(eq: &MahlerEquation, f: &LaurentSeries) -> Result<Verdict> {
    let reg = certify_regular(eq);
    if reg.verdict != Verdict::Inconclusive {
        return Ok(reg.verdict);
    }
    Ok(certify_irregular(eq, f, 2)?.verdict)
}

/// Builds an item from its prefix oracle and recomputes every expectation.
pub fn corpus_item(name: &str) -> Result<CorpusItem> {
    let (equation, prefix) = source(name)?;
    if !verify(&equation, &prefix).holds() {
        return Err(Error::Invariant(format!("{name}: prefix does not solve its equation")));
    }
    let closure_dim = match closure_rep(&equation, &prefix, CLOSURE_CAPS)? {
        ClosureOutcome::Found { rep, .. } => Some(rep.dim),
        ClosureOutcome::Inconclusive { .. } => None,
    };
    let expected = Expected {
        verdict: verdict(&equation, &prefix)?,
        closure_dim,
        normalization: normalize(&equation)?,
    };
    Ok(CorpusItem {
        name: name.to_string(),
        k: equation.k(),
        equation,
        prefix,
        expected,
    })
}

pub fn corpus() -> Result<Vec<CorpusItem>> {
    ITEM_NAMES.iter().map(|n| corpus_item(n)).collect()
}

pub fn golden_path(dir: &Path, name: &str) -> PathBuf {
    dir.join(format!("{name}.json"))
}

/// Writes every item as canonical JSON, one file per item.
pub fn regenerate(dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::InvalidArgument(format!("{}: {e}", dir.display())))?;
    let mut written = Vec::new();
    for item in corpus()? {
        let path = golden_path(dir, &item.name);
        fs::write(&path, to_canonical(&item)?)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        written.push(path);
    }
    Ok(written)
}

/// Names of items whose file is missing or differs from the regenerated
/// canonical text.
pub fn golden_mismatches(dir: &Path) -> Result<Vec<String>> {
    let mut bad = Vec::new();
    for item in corpus()? {
        let fresh = to_canonical(&item)?;
        match fs::read_to_string(golden_path(dir, &item.name)) {
            Ok(stored) if stored == fresh => {}
            _ => bad.push(item.name),
        }
    }
    Ok(bad)
}
