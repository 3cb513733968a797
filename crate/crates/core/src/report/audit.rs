//! Post-solve checks recomputed from the reported series.

use std::fmt;

use super::ScheduleReport;
use crate::builder::{LossOrientation, VarKind};
use crate::model::{derive_index_sets, PortKind, Scenario, Severity};

/// Largest tolerated hub imbalance per step, kW.
pub const CLOSURE_TOLERANCE: f64 = 1e-6;
/// Scheduled flow may exceed its limit by at most this much, kW.
const LIMIT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Closure,
    Curtailment,
    TerminalSoc,
    NetworkLoss,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Closure, Check::Curtailment, Check::TerminalSoc, Check::NetworkLoss];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Closure => "closure",
            Check::Curtailment => "curtailment",
            Check::TerminalSoc => "terminal_soc",
            Check::NetworkLoss => "network_loss",
        }
    }

    pub fn parse(s: &str) -> Option<Check> {
        Check::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub check: Check,
    pub severity: Severity,
    pub subject: String,
    pub value: f64,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} [{}]: {}", self.severity.as_str(), self.check.as_str(), self.subject, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditReport {
    pub findings: Vec<Finding>,
}

impl AuditReport {
    /// False when a hard check failed.
    pub fn passed(&self) -> bool {
        !self.findings.iter().any(|f| f.severity == Severity::Fatal)
    }

    pub fn of(&self, check: Check) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(move |f| f.check == check)
    }

    pub fn value(&self, check: Check, subject: &str) -> Option<f64> {
        self.of(check).find(|f| f.subject == subject).map(|f| f.value)
    }
}

pub fn audit(report: &ScheduleReport, scenario: &Scenario) -> AuditReport {
    let mut findings = vec![closure(report, scenario)];
    let steps = &report.steps;

    for c in &report.curtailment {
        let total = c.total_kwh(steps);
        let worst = c.curtailed.iter().copied().fold(f64::INFINITY, f64::min);
        let subject = format!("{}/{}", c.process, c.carrier);
        if worst < -LIMIT_TOLERANCE {
            findings.push(Finding {
                check: Check::Curtailment,
                severity: Severity::Warning,
                subject,
                value: total,
                message: format!("scheduled flow exceeds its limit by {:e} kW", -worst),
            });
        } else {
            findings.push(Finding {
                check: Check::Curtailment,
                severity: Severity::Info,
                subject,
                value: total,
                message: format!("{total} kWh curtailed over the horizon"),
            });
        }
    }

    for s in &report.soc {
        let last = s.kwh.last().copied().unwrap_or(0.0);
        findings.push(Finding {
            check: Check::TerminalSoc,
            severity: Severity::Info,
            subject: s.storage.clone(),
            value: last,
            message: format!("{last} kWh stored at the end of the horizon"),
        });
    }

    for n in &scenario.networks {
        let per_step = |kind| {
            let mut v = vec![0.0; steps.len()];
            for hub in &n.hubs {
                if let Some(f) = report.flow(kind, hub, Some(&n.carrier), None) {
                    v.iter_mut().zip(&f.kw).for_each(|(a, b)| *a += b);
                }
            }
            v
        };
        let injected = per_step(VarKind::NetIn);
        let extracted = per_step(VarKind::NetOut);
        let factor = 1.0 + n.loss_fraction;
        let worst = injected
            .iter()
            .zip(&extracted)
            .map(|(i, e)| match report.loss_orientation {
                LossOrientation::Physical => (i - factor * e).abs(),
                LossOrientation::Paper => (e - factor * i).abs(),
            })
            .fold(0.0, f64::max);
        let (ti, te) = (report.integrate(&injected), report.integrate(&extracted));
        findings.push(Finding {
            check: Check::NetworkLoss,
            severity: Severity::Info,
            subject: n.carrier.clone(),
            value: worst,
            message: format!(
                "{ti} kWh injected, {te} kWh extracted, {} kWh lost ({} orientation)",
                ti - te,
                report.loss_orientation
            ),
        });
    }
    AuditReport { findings }
}

/// Largest per-step imbalance over every hub and carrier, on both the
/// intake side (imports and returns against process inlets) and the
/// output side (production, extraction, discharge against the sinks).
fn closure(report: &ScheduleReport, scenario: &Scenario) -> Finding {
    let sets = derive_index_sets(scenario).expect("a reported scenario resolves");
    let steps = report.steps.len();
    let mut worst = (0.0f64, String::new());
    let sum = |kind: VarKind, hub: &str, carrier: &str| -> Vec<f64> {
        let mut v = vec![0.0; steps];
        for f in report.flows.iter().filter(|f| f.kind == kind && f.hub == hub && f.carrier.as_deref() == Some(carrier)) {
            v.iter_mut().zip(&f.kw).for_each(|(a, b)| *a += b);
        }
        v
    };
    for (hub, hs) in &sets.hubs {
        let balance = hs.balance_carriers();
        let carriers = hs.inlet_carriers.union(&balance);
        for c in carriers {
            let ret = sum(VarKind::Ret, hub, c);
            let mut residual = vec![0.0; steps];
            if hs.inlet_carriers.contains(c) {
                let imp = sum(VarKind::Imp, hub, c);
                let used = sum(VarKind::InProc, hub, c);
                for t in 0..steps {
                    residual[t] = (imp[t] + ret[t] - used[t]).abs();
                }
            }
            if balance.contains(c) {
                let k = scenario.kw_per_unit(c);
                let load = scenario.port(hub, c, PortKind::Load).and_then(|p| p.load.clone()).unwrap_or_else(|| vec![0.0; steps]);
                let made = sum(VarKind::OutProc, hub, c);
                let net_out = sum(VarKind::NetOut, hub, c);
                let net_in = sum(VarKind::NetIn, hub, c);
                let dis = sum(VarKind::StoDis, hub, c);
                let cha = sum(VarKind::StoCha, hub, c);
                let exp = sum(VarKind::Exp, hub, c);
                for t in 0..steps {
                    let r = made[t] + net_out[t] + dis[t] - load[t] * k - net_in[t] - cha[t] - exp[t] - ret[t];
                    residual[t] = residual[t].max(r.abs());
                }
            }
            for (t, r) in residual.into_iter().enumerate() {
                if r > worst.0 || worst.1.is_empty() {
                    worst = (r, format!("{hub}/{c}/t={}", t + 1));
                }
            }
        }
    }
    let (value, subject) = worst;
    if value > CLOSURE_TOLERANCE {
        Finding {
            check: Check::Closure,
            severity: Severity::Fatal,
            subject,
            value,
            message: format!("hub balance off by {value:e} kW"),
        }
    } else {
        Finding {
            check: Check::Closure,
            severity: Severity::Info,
            subject: if subject.is_empty() { "none".into() } else { subject },
            value,
            message: format!("largest hub imbalance {value:e} kW"),
        }
    }
}
