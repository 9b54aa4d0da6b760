use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::baselines::MbcConfig;
use crate::control::{FtipcConfig, UnrestrictedConfig};
use crate::error::{Error, Result};
use crate::plant::{FaultKind, FaultScenario, PlantConfig};
use crate::N_BLADES;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControllerKind {
    Cpc,
    #[serde(alias = "mbc")]
    MbcIpc,
    Ftipc,
    Uftipc,
}

impl ControllerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ControllerKind::Cpc => "cpc",
            ControllerKind::MbcIpc => "mbc_ipc",
            ControllerKind::Ftipc => "ftipc",
            ControllerKind::Uftipc => "uftipc",
        }
    }
}

impl std::str::FromStr for ControllerKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cpc" => Ok(Self::Cpc),
            "mbc" | "mbc_ipc" => Ok(Self::MbcIpc),
            "ftipc" => Ok(Self::Ftipc),
            "uftipc" => Ok(Self::Uftipc),
            other => Err(Error::Config(format!("unknown controller '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DisturbanceConfig {
    /// 1P blade-load amplitude (load units).
    pub amp_1p: f64,
    pub amp_2p: f64,
    /// Innovation SD (load units); the turbulence-intensity analog.
    pub sigma_e: f64,
}

impl Default for DisturbanceConfig {
    fn default() -> Self {
        Self { amp_1p: 2000.0, amp_2p: 600.0, sigma_e: 0.0 }
    }
}

fn default_duration() -> f64 {
    2000.0
}
fn default_onset() -> f64 {
    1000.0
}
fn default_blade() -> usize {
    N_BLADES
}
fn default_fault() -> FaultKind {
    FaultKind::Healthy
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoadCaseConfig {
    pub id: String,
    /// Load-case label shared by the runs of different controllers.
    #[serde(default)]
    pub lc: String,
    /// Grouping used for per-family tables (e.g. one fault at one wind level).
    #[serde(default)]
    pub family: String,
    pub controller: ControllerKind,
    pub seed: u64,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default = "default_onset")]
    pub onset_s: f64,
    #[serde(default)]
    pub disturbance: DisturbanceConfig,
    #[serde(default = "default_fault")]
    pub fault: FaultKind,
    #[serde(default = "default_blade")]
    pub faulty_blade: usize,
    #[serde(default)]
    pub plant: PlantConfig,
    #[serde(default)]
    pub ftipc: FtipcConfig,
    #[serde(default)]
    pub mbc: MbcConfig,
}

impl LoadCaseConfig {
    pub fn new(id: impl Into<String>, controller: ControllerKind, seed: u64) -> Self {
        let id = id.into();
        Self {
            lc: id.clone(),
            id,
            family: String::new(),
            controller,
            seed,
            duration_s: default_duration(),
            onset_s: default_onset(),
            disturbance: DisturbanceConfig::default(),
            fault: FaultKind::Healthy,
            faulty_blade: N_BLADES,
            plant: PlantConfig::default(),
            ftipc: FtipcConfig::default(),
            mbc: MbcConfig::default(),
        }
    }

    pub fn lc_label(&self) -> &str {
        if self.lc.is_empty() {
            &self.id
        } else {
            &self.lc
        }
    }

    pub fn n_samples(&self) -> usize {
        (self.duration_s / self.plant.dt).round() as usize
    }

    pub fn onset_sample(&self) -> usize {
        (self.onset_s / self.plant.dt).round() as usize
    }

    pub fn fault_scenario(&self) -> Result<FaultScenario> {
        FaultScenario::new(self.fault.clone(), self.faulty_blade, self.onset_sample())
    }

    /// Tuning actually used for the controller, including the uFTIPC mode.
    pub fn effective_ftipc(&self) -> FtipcConfig {
        let mut cfg = self.ftipc.clone();
        if self.controller == ControllerKind::Uftipc && cfg.unrestricted.is_none() {
            cfg.unrestricted = Some(UnrestrictedConfig::default());
        }
        cfg
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::Config("load case id must not be empty".into()));
        }
        let ctx = |e: Error| Error::Config(format!("case '{}': {e}", self.id));
        self.plant.validate().map_err(ctx)?;
        self.effective_ftipc().validate().map_err(ctx)?;
        self.fault_scenario().map_err(ctx)?;
        if !(self.duration_s > 0.0) || !(self.onset_s > 0.0 && self.onset_s < self.duration_s) {
            return Err(Error::Config(format!(
                "case '{}': need 0 < onset ({}) < duration ({})",
                self.id, self.onset_s, self.duration_s
            )));
        }
        let steps = self.duration_s / self.plant.dt;
        if (steps - steps.round()).abs() > 1e-6 {
            return Err(Error::Config(format!("case '{}': duration is not a whole number of steps", self.id)));
        }
        let d = &self.disturbance;
        if ![d.amp_1p, d.amp_2p, d.sigma_e].iter().all(|v| v.is_finite()) || d.sigma_e < 0.0 {
            return Err(Error::Config(format!(
                "case '{}': disturbance amplitudes must be finite, sigma >= 0",
                self.id
            )));
        }
        if !(self.mbc.kp.is_finite() && self.mbc.ki.is_finite() && self.mbc.cap > 0.0) {
            return Err(Error::Config(format!("case '{}': MBC gains must be finite and cap > 0", self.id)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    #[serde(default)]
    pub name: String,
    pub cases: Vec<LoadCaseConfig>,
}

impl CampaignConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = HashSet::new();
        for c in &self.cases {
            if !seen.insert(c.id.as_str()) {
                return Err(Error::Config(format!("duplicate case id '{}'", c.id)));
            }
            c.validate()?;
        }
        Ok(())
    }
}

/// Seed base of the shipped `configs/default_campaign.json`.
pub const DEFAULT_CAMPAIGN_SEED: u64 = 7;

/// Two disturbance levels × three turbulence analogs × three faults × three
/// controllers. Numbering runs PAD, PAS, blade fault at the lower level, then
/// the same at the higher level.
pub fn default_campaign(seed: u64) -> CampaignConfig {
    struct Level {
        tag: &'static str,
        amp_1p: f64,
        amp_2p: f64,
        collective: f64,
        stuck: f64,
    }
    let levels = [
        Level { tag: "L1", amp_1p: 2000.0, amp_2p: 600.0, collective: 10.0, stuck: 0.0 },
        Level { tag: "L2", amp_1p: 2500.0, amp_2p: 750.0, collective: 15.0, stuck: 10.0 },
    ];
    let tis = [0.0, 0.0375, 0.15];
    let mut cases = Vec::new();
    let mut lc = 0;
    for lvl in &levels {
        let faults = [
            ("PAD", FaultKind::Pad { scale: 0.5 }),
            ("PAS", FaultKind::Pas { stuck_deg: lvl.stuck }),
            ("BF", FaultKind::BladeStiffness { a: 0.2 }),
        ];
        for (fname, fault) in faults {
            for ti in tis {
                lc += 1;
                let label = format!("LC{lc:02}");
                for ctrl in [ControllerKind::Cpc, ControllerKind::MbcIpc, ControllerKind::Ftipc] {
                    let mut c = LoadCaseConfig::new(format!("{label}-{}", ctrl.as_str()), ctrl, seed + lc as u64);
                    c.lc = label.clone();
                    c.family = format!("{fname}-{}", lvl.tag);
                    c.fault = fault.clone();
                    c.disturbance =
                        DisturbanceConfig { amp_1p: lvl.amp_1p, amp_2p: lvl.amp_2p, sigma_e: ti * lvl.amp_1p };
                    c.plant.collective_deg = lvl.collective;
                    cases.push(c);
                }
            }
        }
    }
    CampaignConfig { name: "default".into(), cases }
}
