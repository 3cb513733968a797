//! Serialized form of a scenario document (schema version 1).

use std::fmt;

use serde::de::{self, MapAccess, SeqAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::model::{CarrierKind, CoefficientUnit, PortKind, Side, TerminalPolicy};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: u32,
    #[serde(default)]
    pub name: String,
    pub time_grid: GridDoc,
    #[serde(default)]
    pub carriers: Vec<CarrierDoc>,
    #[serde(default)]
    pub hubs: Vec<HubDoc>,
    #[serde(default)]
    pub processes: Vec<ProcessDoc>,
    #[serde(default)]
    pub storages: Vec<StorageDoc>,
    #[serde(default)]
    pub ports: Vec<PortDoc>,
    #[serde(default)]
    pub networks: Vec<NetworkDoc>,
}

/// Either `count` + `step_hours` or an explicit `steps_hours` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_hours: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_hours: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CarrierDoc {
    pub id: String,
    pub kind: CarrierKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chemical_exergy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubDoc {
    pub id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShareDoc {
    pub carrier: String,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitDoc {
    pub carrier: String,
    pub side: Side,
    pub max: SeriesDoc,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub renewable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessDoc {
    pub id: String,
    pub hub: String,
    pub efficiency: EfficiencyDoc,
    pub inlets: Vec<ShareDoc>,
    pub outlets: Vec<ShareDoc>,
    #[serde(default)]
    pub limits: Vec<LimitDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StorageDoc {
    pub id: String,
    pub hub: String,
    pub carrier: String,
    pub round_trip_efficiency: f64,
    pub capacity: f64,
    pub max_charge_rate: f64,
    pub max_discharge_rate: f64,
    #[serde(default)]
    pub initial_soc: f64,
    #[serde(default = "free_policy")]
    pub terminal_policy: TerminalPolicy,
}

fn free_policy() -> TerminalPolicy {
    TerminalPolicy::Free
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PortDoc {
    pub hub: String,
    pub carrier: String,
    pub kind: PortKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub price: Option<SeriesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max: Option<SeriesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min: Option<SeriesDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load: Option<SeriesDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub carrier: String,
    pub hubs: Vec<String>,
    #[serde(default)]
    pub loss_fraction: f64,
}

/// A bare number, or `{"value": .., "unit": ..}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EfficiencyDoc {
    Plain(f64),
    Declared { value: f64, unit: CoefficientUnit },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindDoc {
    pub coefficient: f64,
    pub cut_in: f64,
    pub cut_off: f64,
    pub speed: Box<SeriesDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolarDoc {
    pub area: f64,
    pub irradiance: Box<SeriesDoc>,
}

/// Source of a time series.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesDoc {
    Inline(Vec<f64>),
    /// Same value at every step; a bare number means the same.
    Constant(f64),
    /// Two-column CSV relative to the document.
    File(String),
    Wind(WindDoc),
    Solar(SolarDoc),
}

impl Serialize for EfficiencyDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            EfficiencyDoc::Plain(v) => s.serialize_f64(v),
            EfficiencyDoc::Declared { value, unit } => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("value", &value)?;
                m.serialize_entry("unit", &unit)?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for EfficiencyDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = EfficiencyDoc;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or an object with `value` and `unit`")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(EfficiencyDoc::Plain(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(EfficiencyDoc::Plain(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(EfficiencyDoc::Plain(v as f64))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut value = None;
                let mut unit = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "value" if value.is_none() => value = Some(map.next_value::<f64>()?),
                        "unit" if unit.is_none() => unit = Some(map.next_value::<CoefficientUnit>()?),
                        "value" | "unit" => return Err(de::Error::custom(format!("duplicate field `{key}`"))),
                        other => return Err(de::Error::unknown_field(other, &["value", "unit"])),
                    }
                }
                Ok(EfficiencyDoc::Declared {
                    value: value.ok_or_else(|| de::Error::missing_field("value"))?,
                    unit: unit.ok_or_else(|| de::Error::missing_field("unit"))?,
                })
            }
        }
        d.deserialize_any(V)
    }
}

const SERIES_KEYS: &[&str] = &["constant", "file", "wind", "solar"];

impl Serialize for SeriesDoc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if let SeriesDoc::Inline(v) = self {
            return v.serialize(s);
        }
        let mut m = s.serialize_map(Some(1))?;
        match self {
            SeriesDoc::Inline(_) => unreachable!(),
            SeriesDoc::Constant(v) => m.serialize_entry("constant", v)?,
            SeriesDoc::File(p) => m.serialize_entry("file", p)?,
            SeriesDoc::Wind(w) => m.serialize_entry("wind", w)?,
            SeriesDoc::Solar(p) => m.serialize_entry("solar", p)?,
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for SeriesDoc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = SeriesDoc;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a series: array of numbers, number, or one of {constant, file, wind, solar}")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
                Ok(SeriesDoc::Constant(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(SeriesDoc::Constant(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(SeriesDoc::Constant(v as f64))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::with_capacity(seq.size_hint().unwrap_or(0));
                while let Some(v) = seq.next_element::<f64>()? {
                    out.push(v);
                }
                Ok(SeriesDoc::Inline(out))
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let key: String = map.next_key()?.ok_or_else(|| de::Error::custom("empty series object"))?;
                let series = match key.as_str() {
                    "constant" => SeriesDoc::Constant(map.next_value()?),
                    "file" => SeriesDoc::File(map.next_value()?),
                    "wind" => SeriesDoc::Wind(map.next_value()?),
                    "solar" => SeriesDoc::Solar(map.next_value()?),
                    other => return Err(de::Error::unknown_field(other, SERIES_KEYS)),
                };
                if let Some(extra) = map.next_key::<String>()? {
                    return Err(de::Error::custom(format!("series object takes a single key, found extra `{extra}`")));
                }
                Ok(series)
            }
        }
        d.deserialize_any(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_forms() {
        let parse = |s: &str| serde_json::from_str::<SeriesDoc>(s).unwrap();
        assert_eq!(parse("[1, 2.5]"), SeriesDoc::Inline(vec![1.0, 2.5]));
        assert_eq!(parse("3"), SeriesDoc::Constant(3.0));
        assert_eq!(parse(r#"{"constant": 0.5}"#), SeriesDoc::Constant(0.5));
        assert_eq!(parse(r#"{"file": "a.csv"}"#), SeriesDoc::File("a.csv".into()));
        match parse(r#"{"solar": {"area": 20, "irradiance": {"file": "g.csv"}}}"#) {
            SeriesDoc::Solar(s) => assert_eq!(s.area, 20.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_series_key_is_rejected_with_position() {
        let err = serde_json::from_str::<SeriesDoc>("{\n  \"consant\": 1}").unwrap_err();
        assert!(err.to_string().contains("unknown field `consant`"), "{err}");
        assert_eq!(err.line(), 2);
    }

    #[test]
    fn efficiency_forms_round_trip() {
        for text in ["0.75", r#"{"value":650.0,"unit":"kg/kWh"}"#] {
            let e: EfficiencyDoc = serde_json::from_str(text).unwrap();
            let back: EfficiencyDoc = serde_json::from_str(&serde_json::to_string(&e).unwrap()).unwrap();
            assert_eq!(e, back);
        }
        assert!(serde_json::from_str::<EfficiencyDoc>(r#"{"value":1,"units":"kW/kW"}"#).is_err());
    }
}
