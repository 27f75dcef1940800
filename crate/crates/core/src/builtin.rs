//! Built-in coastal New England microgrid register.
//!
//! Ranges follow the printed numeric values of the published register.
//! Where the printed number is unusable or contradicts its own label the
//! entry is repaired, and each repair is listed in the scenario
//! description.

use crate::model::{BoundedRange, Scenario, ThreatSpec, VulnerabilitySpec};

pub const NEW_ENGLAND_NAME: &str = "Coastal New England Microgrid";

pub const HURRICANE: &str = "Hurricane";
pub const SEVERE_WINTER_STORM: &str = "Severe Winter Storm";
pub const SEVERE_THUNDERSTORM: &str = "Severe Thunderstorm";
pub const HAIL: &str = "Hail";
pub const HIGH_WIND: &str = "High Wind";
pub const FLOODING: &str = "Flooding";
pub const EARTHQUAKE: &str = "Earthquake";
pub const TORNADO: &str = "Tornado";
pub const EMP: &str = "Electromagnetic Pulse (non-lightning)";
pub const FUEL_PRICE_SPIKES: &str = "Fuel Price Spikes";
pub const DROUGHT: &str = "Drought";
pub const TSUNAMI: &str = "Tsunami";
pub const WILDFIRE: &str = "Wildfire";
pub const CYBERATTACK: &str = "Cyberattack / IT Fault";
pub const TERRORISM: &str = "Terrorism / Sabotage / Physical Failure";

/// Placeholder vulnerability for threats with no listed pathway.
pub const NO_VULNERABILITY: &str = "none";

const DESCRIPTION: &str = "\
Grid-tied microgrid serving municipal, medical, emergency and food-service loads in a small \
coastal New England town: 1 MW rooftop PV, 1 MW wind turbine, 8 MW natural gas generation, \
4 MW / 8 MWh battery storage, above-ground distribution lines. \
Repairs to the printed register: \
(1) Severe Thunderstorm / Clouds and Rain Lead to PV Generation Losses operational impact printed \
'Negligible to Very Low 0 - 0.5'; label trusted, [0, 0.05]. \
(2) Hail / Infrastructure Damage to PV operational and infrastructural impacts printed \
'Negligible to Very Low 0 - 0.5'; label trusted, [0, 0.05]. \
(3) Severe Thunderstorm / High Winds and Rain Damage Distribution probability printed '0.01 - 0.5s'; \
read as [0.01, 0.5]. \
(4) Electromagnetic Pulse probability printed 'Very Low 0.01 - 0.5'; number trusted, [0.01, 0.5]. \
(5) Drought, Tsunami and Wildfire list no vulnerability; each carries a placeholder \
vulnerability 'none' with all ranges [0, 0.01].";

const NEGLIGIBLE: BoundedRange = BoundedRange { lo: 0.0, hi: 0.01 };

fn r(lo: f64, hi: f64) -> BoundedRange {
    BoundedRange { lo, hi }
}

fn vuln(name: &str, probability: BoundedRange, op: BoundedRange, infra: BoundedRange) -> VulnerabilitySpec {
    VulnerabilitySpec {
        name: name.to_string(),
        probability,
        operational_impact: op,
        infrastructural_impact: infra,
    }
}

fn threat(
    name: &str,
    probability: BoundedRange,
    importance: f64,
    vulnerabilities: Vec<VulnerabilitySpec>,
) -> ThreatSpec {
    ThreatSpec {
        name: name.to_string(),
        probability,
        importance,
        vulnerabilities,
    }
}

fn placeholder() -> Vec<VulnerabilitySpec> {
    vec![vuln(NO_VULNERABILITY, NEGLIGIBLE, NEGLIGIBLE, NEGLIGIBLE)]
}

/// The full fifteen-threat register for the coastal New England site.
pub fn builtin_new_england() -> Scenario {
    let threats = vec![
        threat(
            HURRICANE,
            r(0.2, 0.7),
            1.0,
            vec![
                vuln(
                    "Clouds and Rain Lead to PV Generation Losses",
                    r(0.5, 0.7),
                    r(0.0, 0.05),
                    NEGLIGIBLE,
                ),
                vuln(
                    "High Winds Leads to Turbine Generation Losses",
                    r(0.2, 0.5),
                    r(0.0, 0.2),
                    NEGLIGIBLE,
                ),
                vuln("High Winds Damages PV", r(0.05, 0.2), r(0.0, 0.5), r(0.0, 0.5)),
                vuln("High Winds Damage Turbine", r(0.05, 0.2), r(0.0, 0.5), r(0.0, 0.5)),
                vuln("High Winds Damage Distribution", r(0.05, 0.5), r(0.0, 0.5), r(0.0, 0.5)),
                vuln(
                    "Heavy Rains/Storm Surge Damages Generator",
                    r(0.05, 0.2),
                    r(0.0, 0.5),
                    r(0.0, 0.5),
                ),
                vuln(
                    "Heavy Rains/Storm Surge Damages Storage",
                    r(0.05, 0.2),
                    r(0.0, 0.5),
                    r(0.0, 0.5),
                ),
            ],
        ),
        threat(
            SEVERE_WINTER_STORM,
            r(0.7, 0.9),
            1.0,
            vec![
                vuln(
                    "Snow and Ice Lead to PV Generation Losses",
                    r(0.5, 0.7),
                    r(0.0, 0.05),
                    NEGLIGIBLE,
                ),
                vuln(
                    "Snow and Ice Lead to Turbine Generation Losses",
                    r(0.01, 0.2),
                    r(0.0, 0.2),
                    NEGLIGIBLE,
                ),
                vuln("Snow, Ice, and Wind Damages PV", r(0.01, 0.2), r(0.0, 0.5), r(0.0, 0.5)),
                vuln(
                    "Snow, Ice, and Wind Damages Turbine",
                    r(0.01, 0.2),
                    r(0.0, 0.5),
                    r(0.0, 0.5),
                ),
                vuln(
                    "Snow, Ice, and Wind Damages Distribution",
                    r(0.01, 0.5),
                    r(0.0, 0.5),
                    r(0.0, 0.5),
                ),
            ],
        ),
        threat(
            SEVERE_THUNDERSTORM,
            r(0.7, 0.9),
            1.0,
            vec![
                vuln(
                    "Clouds and Rain Lead to PV Generation Losses",
                    r(0.5, 0.7),
                    r(0.0, 0.05),
                    NEGLIGIBLE,
                ),
                vuln(
                    "High Winds Leads to Turbine Generation Losses",
                    r(0.01, 0.2),
                    r(0.0, 0.2),
                    NEGLIGIBLE,
                ),
                vuln("High Winds and Rain Damage PV", r(0.01, 0.2), r(0.0, 0.2), r(0.0, 0.2)),
                vuln(
                    "High Winds and Rain Damage Turbine",
                    r(0.01, 0.2),
                    r(0.0, 0.2),
                    r(0.0, 0.2),
                ),
                vuln(
                    "High Winds and Rain Damage Distribution",
                    r(0.01, 0.5),
                    r(0.0, 0.2),
                    r(0.0, 0.2),
                ),
                vuln(
                    "Lightning Causes Electrical System Damage",
                    r(0.01, 0.05),
                    r(0.0, 0.9),
                    r(0.0, 0.5),
                ),
            ],
        ),
        threat(
            HAIL,
            r(0.7, 0.9),
            1.0,
            vec![vuln(
                "Infrastructure Damage to PV",
                r(0.01, 0.2),
                r(0.0, 0.05),
                r(0.0, 0.05),
            )],
        ),
        threat(
            HIGH_WIND,
            r(0.2, 0.7),
            1.0,
            vec![
                vuln(
                    "High Winds Leads to Wind Generation Losses",
                    r(0.5, 0.7),
                    r(0.0, 0.2),
                    NEGLIGIBLE,
                ),
                vuln("Infrastructure Damage to PV", r(0.01, 0.2), r(0.0, 0.2), r(0.0, 0.2)),
                vuln(
                    "Infrastructure Damage to Turbine",
                    r(0.01, 0.2),
                    r(0.0, 0.2),
                    r(0.0, 0.2),
                ),
                vuln(
                    "Infrastructure Damage to Distribution",
                    r(0.01, 0.2),
                    r(0.0, 0.2),
                    r(0.0, 0.2),
                ),
            ],
        ),
        threat(
            FLOODING,
            r(0.05, 0.5),
            1.0,
            vec![
                vuln(
                    "Infrastructure Damage to Generator",
                    r(0.01, 0.5),
                    r(0.0, 0.7),
                    r(0.0, 0.7),
                ),
                vuln(
                    "Infrastructure Damage to Storage",
                    r(0.01, 0.5),
                    r(0.0, 0.7),
                    r(0.0, 0.7),
                ),
            ],
        ),
        threat(
            EARTHQUAKE,
            r(0.7, 0.9),
            1.0,
            vec![
                vuln("PV Damage", r(0.01, 0.05), r(0.0, 0.2), r(0.0, 0.2)),
                vuln("Turbine Damage", r(0.01, 0.05), r(0.0, 0.2), r(0.0, 0.2)),
                vuln("Generator Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Storage Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Distribution Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
            ],
        ),
        threat(
            TORNADO,
            r(0.7, 0.9),
            1.0,
            vec![
                vuln("PV Damage", r(0.01, 0.05), r(0.0, 0.2), r(0.0, 0.7)),
                vuln("Turbine Damage", r(0.01, 0.05), r(0.0, 0.2), r(0.0, 0.7)),
                vuln("Generator Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Storage Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Distribution Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
            ],
        ),
        threat(
            EMP,
            r(0.01, 0.5),
            1.0,
            vec![vuln("Inverter Damage", r(0.01, 0.5), r(0.0, 0.9), r(0.0, 0.5))],
        ),
        threat(
            FUEL_PRICE_SPIKES,
            r(0.01, 0.2),
            1.0,
            vec![vuln("Operation Shutdown", r(0.01, 0.2), r(0.0, 0.7), NEGLIGIBLE)],
        ),
        threat(DROUGHT, r(0.3, 0.5), 1.0, placeholder()),
        threat(TSUNAMI, NEGLIGIBLE, 0.0, placeholder()),
        threat(WILDFIRE, NEGLIGIBLE, 0.0, placeholder()),
        threat(
            CYBERATTACK,
            r(0.05, 0.3),
            1.0,
            vec![
                vuln("Controls Override", r(0.01, 0.2), r(0.0, 1.0), NEGLIGIBLE),
                vuln("PV Damage", r(0.01, 0.05), r(0.0, 0.2), r(0.0, 0.2)),
                vuln("Turbine Damage", r(0.01, 0.05), r(0.0, 0.2), r(0.0, 0.2)),
                vuln("Generator Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Storage Damage", r(0.01, 0.05), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Distribution Damage", r(0.01, 0.05), r(0.0, 1.0), r(0.0, 1.0)),
            ],
        ),
        threat(
            TERRORISM,
            r(0.05, 0.3),
            1.0,
            vec![
                vuln("PV Damage", r(0.01, 1.0), r(0.0, 0.2), r(0.0, 0.2)),
                vuln("Turbine Damage", r(0.01, 1.0), r(0.0, 0.2), r(0.0, 0.2)),
                vuln("Generator Damage", r(0.01, 1.0), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Storage Damage", r(0.01, 1.0), r(0.0, 0.7), r(0.0, 0.7)),
                vuln("Distribution Damage", r(0.01, 1.0), r(0.0, 1.0), r(0.0, 1.0)),
            ],
        ),
    ];

    Scenario {
        name: NEW_ENGLAND_NAME.to_string(),
        description: DESCRIPTION.to_string(),
        threats,
    }
}
