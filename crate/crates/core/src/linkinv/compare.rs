//! Layered comparison of two links.

use serde::Serialize;

use super::{
    fingerprint, imq, mq_specialized, EnhancedFingerprint, ImqOutcome, LinkError,
    DEFAULT_QUANDLE_CAP,
};
use crate::laurent::ScalarRing;
use crate::linkdiag::Diagram;
use crate::quandle::{iso_search, FiniteQuandle, IsoOutcome, DEFAULT_ISO_CAP};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum IsoVerdict {
    Isomorphic {
        map: Vec<usize>,
    },
    NotIsomorphic {
        reason: String,
    },
    /// at least one side is infinite
    Infinite,
    TooLarge {
        sizes: (usize, usize),
    },
    Undecided,
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompareVerdict {
    pub module_equal: bool,
    /// first ring whose module record differs
    pub module_witness: Option<String>,
    pub enhanced_equal: bool,
    /// first differing enhanced record, as JSON
    pub enhanced_witness: Option<serde_json::Value>,
    pub imq: IsoVerdict,
    pub mq: Vec<(String, IsoVerdict)>,
}

impl CompareVerdict {
    pub fn summary(&self) -> String {
        let eq = |b: bool| if b { "equal" } else { "differ" };
        let iso = |v: &IsoVerdict| match v {
            IsoVerdict::Isomorphic { .. } => "isomorphic".to_string(),
            IsoVerdict::NotIsomorphic { reason } => format!("not isomorphic ({reason})"),
            IsoVerdict::Infinite => "infinite".to_string(),
            IsoVerdict::TooLarge { .. } => "too large".to_string(),
            IsoVerdict::Undecided => "undecided".to_string(),
        };
        let mut s = format!(
            "module: {}; enhanced: {}",
            eq(self.module_equal),
            eq(self.enhanced_equal)
        );
        if !self.enhanced_equal && self.module_equal {
            s.push_str(" (longitude sign)");
        }
        s.push_str(&format!("; IMQ: {}", iso(&self.imq)));
        for (r, v) in &self.mq {
            s.push_str(&format!("; MQ[{r}]: {}", iso(v)));
        }
        s
    }
}

fn iso_verdict(a: &FiniteQuandle, b: &FiniteQuandle) -> Result<IsoVerdict, LinkError> {
    if a.size() > DEFAULT_ISO_CAP || b.size() > DEFAULT_ISO_CAP {
        return Ok(IsoVerdict::TooLarge {
            sizes: (a.size(), b.size()),
        });
    }
    Ok(match iso_search(a, b, DEFAULT_ISO_CAP)? {
        IsoOutcome::Isomorphic(map) => IsoVerdict::Isomorphic { map },
        IsoOutcome::Undecided => IsoVerdict::Undecided,
        other => IsoVerdict::NotIsomorphic {
            reason: format!("{other:?}"),
        },
    })
}

fn first_difference(
    a: &EnhancedFingerprint,
    b: &EnhancedFingerprint,
    module_only: bool,
) -> Option<serde_json::Value> {
    if a.mu != b.mu {
        return Some(serde_json::json!({ "mu": [a.mu, b.mu] }));
    }
    a.records.iter().zip(&b.records).find_map(|(x, y)| {
        let differs = if module_only {
            x.module_part() != y.module_part()
        } else {
            x != y
        };
        differs.then(|| serde_json::json!({ "left": x, "right": y }))
    })
}

pub fn compare_links(
    d1: &Diagram,
    d2: &Diagram,
    panel: &[ScalarRing],
) -> Result<CompareVerdict, LinkError> {
    let (f1, f2) = (fingerprint(d1, panel)?, fingerprint(d2, panel)?);
    let module_witness = first_difference(&f1, &f2, true)
        .map(|v| v["left"]["ring"].as_str().unwrap_or("mu").to_string());
    let enhanced_witness = first_difference(&f1, &f2, false);

    let imq_verdict = match (imq(d1, DEFAULT_QUANDLE_CAP)?, imq(d2, DEFAULT_QUANDLE_CAP)?) {
        (ImqOutcome::Finite(a), ImqOutcome::Finite(b)) => {
            iso_verdict(&a.quandle.quandle, &b.quandle.quandle)?
        }
        _ => IsoVerdict::Infinite,
    };

    let mut mq = Vec::new();
    for r in panel.iter().filter(|r| r.order().is_some()) {
        let v = match (
            mq_specialized(d1, r, DEFAULT_QUANDLE_CAP),
            mq_specialized(d2, r, DEFAULT_QUANDLE_CAP),
        ) {
            (Ok(a), Ok(b)) => iso_verdict(&a.quandle.quandle, &b.quandle.quandle)?,
            (Err(LinkError::InfiniteUnsupported), _) | (_, Err(LinkError::InfiniteUnsupported)) => {
                IsoVerdict::Infinite
            }
            (Err(e), _) | (_, Err(e)) => {
                if e.is_size_cap() {
                    IsoVerdict::TooLarge { sizes: (0, 0) }
                } else {
                    return Err(e);
                }
            }
        };
        mq.push((r.to_string(), v));
    }

    Ok(CompareVerdict {
        module_equal: module_witness.is_none(),
        module_witness,
        enhanced_equal: enhanced_witness.is_none(),
        enhanced_witness,
        imq: imq_verdict,
        mq,
    })
}
