//! Flag and config values: numbers with `bp`/`%` suffixes and lists.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};

/// A fraction or plain number. Accepts `0.002`, `20bp`, `5%`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl FromStr for Num {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim();
        let (body, scale) = if let Some(b) = t.strip_suffix("bp").or_else(|| t.strip_suffix("bps")) {
            (b, 1e-4)
        } else if let Some(b) = t.strip_suffix('%') {
            (b, 1e-2)
        } else {
            (t, 1.0)
        };
        let x: f64 = body.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
        if !x.is_finite() {
            return Err(format!("`{s}` is not finite"));
        }
        Ok(Num(x * scale))
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Num;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a string such as \"20bp\"")
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> Result<Num, E> {
                Ok(Num(x))
            }
            fn visit_i64<E: de::Error>(self, x: i64) -> Result<Num, E> {
                Ok(Num(x as f64))
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> Result<Num, E> {
                Ok(Num(x as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Num, E> {
                s.parse().map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// Comma-separated numbers, e.g. `0.25,0.5,75%`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

impl FromStr for NumList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let v = s.split(',').map(|x| x.parse::<Num>().map(|n| n.0)).collect::<Result<Vec<_>, _>>()?;
        Ok(NumList(v))
    }
}

impl Serialize for NumList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = NumList;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of numbers or a comma-separated string")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<NumList, E> {
                s.parse().map_err(E::custom)
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> Result<NumList, E> {
                Ok(NumList(vec![x]))
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> Result<NumList, E> {
                Ok(NumList(vec![x as f64]))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<NumList, A::Error> {
                let mut v = Vec::new();
                while let Some(n) = seq.next_element::<Num>()? {
                    v.push(n.0);
                }
                Ok(NumList(v))
            }
        }
        d.deserialize_any(V)
    }
}

/// Day counts: `5`, `1,2,5` or the inclusive range `1..5`.
#[derive(Debug, Clone, PartialEq)]
pub struct DayList(pub Vec<usize>);

impl FromStr for DayList {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = |x: &str| format!("`{x}` is not a day count");
        let mut v = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            if let Some((a, b)) = part.split_once("..") {
                let a: usize = a.trim().parse().map_err(|_| bad(part))?;
                let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad(part))?;
                if b < a {
                    return Err(format!("empty range `{part}`"));
                }
                v.extend(a..=b);
            } else {
                v.push(part.parse().map_err(|_| bad(part))?);
            }
        }
        Ok(DayList(v))
    }
}

impl Serialize for DayList {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DayList {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = DayList;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a day count, an array of them, or a range such as \"1..5\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<DayList, E> {
                s.parse().map_err(E::custom)
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> Result<DayList, E> {
                Ok(DayList(vec![x as usize]))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<DayList, A::Error> {
                let mut v = Vec::new();
                while let Some(n) = seq.next_element::<usize>()? {
                    v.push(n);
                }
                Ok(DayList(v))
            }
        }
        d.deserialize_any(V)
    }
}
