//! JSON encoding for sequences of 128-bit integers: plain numbers when they
//! fit in 64 bits, decimal strings beyond that. Buffered deserialization
//! (tagged enums, flattened structs) cannot carry 128-bit numbers.

use std::fmt;
use std::marker::PhantomData;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[doc(hidden)]
pub struct Item<T>(pub T);

impl Serialize for Item<u128> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match u64::try_from(self.0) {
            Ok(v) => s.serialize_u64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl Serialize for Item<i128> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct WideVisitor<T>(PhantomData<T>);

impl<T> Visitor<'_> for WideVisitor<T>
where
    T: TryFrom<u64> + TryFrom<i64> + std::str::FromStr,
{
    type Value = Item<T>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Item<T>, E> {
        T::try_from(v).map(Item).map_err(|_| E::custom(format!("{v} is out of range")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Item<T>, E> {
        T::try_from(v).map(Item).map_err(|_| E::custom(format!("{v} is out of range")))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Item<T>, E> {
        v.parse().map(Item).map_err(|_| E::custom(format!("`{v}` is not an integer in range")))
    }
}

impl<'de> Deserialize<'de> for Item<u128> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(WideVisitor(PhantomData))
    }
}

impl<'de> Deserialize<'de> for Item<i128> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(WideVisitor(PhantomData))
    }
}

pub fn serialize<'a, C, T, S>(items: &'a C, s: S) -> Result<S::Ok, S::Error>
where
    &'a C: IntoIterator<Item = &'a T>,
    T: Copy + 'a,
    Item<T>: Serialize,
    S: Serializer,
{
    s.collect_seq(items.into_iter().map(|&x| Item(x)))
}

pub fn deserialize<'de, C, T, D>(d: D) -> Result<C, D::Error>
where
    C: FromIterator<T>,
    Item<T>: Deserialize<'de>,
    D: Deserializer<'de>,
{
    Ok(Vec::<Item<T>>::deserialize(d)?.into_iter().map(|i| i.0).collect())
}
