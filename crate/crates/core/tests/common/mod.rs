#![allow(dead_code)]

use microgrid_resilience::{BoundedRange, RatingLevel, Scenario, ThreatSpec, VulnerabilitySpec};
use rand_chacha::rand_core::RngCore;

pub fn unit<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

pub fn below<R: RngCore>(rng: &mut R, n: u64) -> u64 {
    rng.next_u64() % n
}

/// Random valid range; a third of the time a whole-level span, sometimes degenerate.
pub fn range<R: RngCore>(rng: &mut R) -> BoundedRange {
    match below(rng, 6) {
        0 | 1 => {
            let a = RatingLevel::ALL[below(rng, 7) as usize];
            let b = RatingLevel::ALL[below(rng, 7) as usize];
            let (a, b) = (a.min(b), a.max(b));
            BoundedRange {
                lo: a.range().lo,
                hi: b.range().hi,
            }
        }
        2 => BoundedRange::point(unit(rng)),
        _ => {
            let (x, y) = (unit(rng), unit(rng));
            BoundedRange {
                lo: x.min(y),
                hi: x.max(y),
            }
        }
    }
}

const ALPHABET: &[char] = &['a', 'Z', ' ', '/', '"', '\\', 'é', '雨', '-', '9', '\n', '⚡'];

pub fn name<R: RngCore>(rng: &mut R, prefix: &str, index: usize) -> String {
    let len = below(rng, 8) as usize;
    let tail: String = (0..len)
        .map(|_| ALPHABET[below(rng, ALPHABET.len() as u64) as usize])
        .collect();
    format!("{prefix}{index}{tail}")
}

pub fn scenario<R: RngCore>(rng: &mut R) -> Scenario {
    let n_threats = 1 + below(rng, 6) as usize;
    let threats = (0..n_threats)
        .map(|ti| {
            let n_vulns = 1 + below(rng, 5) as usize;
            ThreatSpec {
                name: name(rng, "threat", ti),
                probability: range(rng),
                importance: match below(rng, 4) {
                    0 => 0.0,
                    1 => 1.0,
                    _ => unit(rng),
                },
                vulnerabilities: (0..n_vulns)
                    .map(|vi| VulnerabilitySpec {
                        name: name(rng, "vuln", vi),
                        probability: range(rng),
                        operational_impact: range(rng),
                        infrastructural_impact: range(rng),
                    })
                    .collect(),
            }
        })
        .collect();
    Scenario {
        name: name(rng, "scenario", 0),
        description: name(rng, "", 0),
        threats,
    }
}
