//! Deterministic decimal formatting and the CSV/JSON emitters.
//!
//! Identical invocations must produce byte-identical output: all floats are
//! rendered at a digit count fixed by the requested precision, and the rows
//! come out of deterministic summation orders.

use crate::estimate::TruncEstimate;
use crate::sweep::{SweepConfig, SweepRow};
use qpoch_core::arith::Complex;
use rug::Float;
use serde::Serialize;

/// Decimal digits carried by a `prec_bits`-bit request.
pub fn digits_for(prec_bits: u32) -> usize {
    (prec_bits as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

/// Fixed-width scientific rendering of a float.
pub fn fmt_real(x: &Float, prec_bits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits_for(prec_bits)))
}

pub fn fmt_complex(z: &Complex, prec_bits: u32) -> String {
    let re = fmt_real(&z.re, prec_bits);
    if z.im.is_zero() {
        return re;
    }
    let im = fmt_real(&z.im, prec_bits);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

#[derive(Serialize)]
struct SweepMeta {
    regime: String,
    c: String,
    x: String,
    beta: String,
    prec_bits: u32,
    max_order: i64,
}

#[derive(Serialize)]
struct SweepRowDto {
    order: i64,
    beta_exp: String,
    partial_re: String,
    partial_im: String,
    abs_error: String,
}

#[derive(Serialize)]
struct SweepDto {
    meta: SweepMeta,
    rows: Vec<SweepRowDto>,
}

fn sweep_row_dto(r: &SweepRow, bits: u32) -> SweepRowDto {
    SweepRowDto {
        order: r.order,
        beta_exp: r.beta_exp.to_string(),
        partial_re: fmt_real(&r.partial.re, bits),
        partial_im: fmt_real(&r.partial.im, bits),
        abs_error: fmt_real(&r.abs_error, bits),
    }
}

/// CSV table: `order,beta_exp,partial_re,partial_im,abs_error`.
pub fn sweep_csv(cfg: &SweepConfig, rows: &[SweepRow]) -> String {
    let bits = cfg.prec.bits();
    let mut out = String::from("order,beta_exp,partial_re,partial_im,abs_error\n");
    for r in rows {
        let d = sweep_row_dto(r, bits);
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            d.order, d.beta_exp, d.partial_re, d.partial_im, d.abs_error
        ));
    }
    out
}

/// JSON mirror of the CSV table, with a meta header.
pub fn sweep_json(cfg: &SweepConfig, rows: &[SweepRow]) -> String {
    let bits = cfg.prec.bits();
    let dto = SweepDto {
        meta: SweepMeta {
            regime: cfg.regime.name().into(),
            c: cfg.c.to_string(),
            x: fmt_real(&cfg.x, bits),
            beta: fmt_real(&cfg.beta, bits),
            prec_bits: bits,
            max_order: cfg.max_order,
        },
        rows: rows.iter().map(|r| sweep_row_dto(r, bits)).collect(),
    };
    let mut s = serde_json::to_string_pretty(&dto).expect("sweep serializes");
    s.push('\n');
    s
}

/// Simple key,value table in CSV (`key,value` lines) or JSON.
pub struct KvTable {
    pairs: Vec<(String, String)>,
}

impl KvTable {
    pub fn new() -> Self {
        KvTable { pairs: Vec::new() }
    }

    pub fn push(&mut self, key: &str, value: String) {
        self.pairs.push((key.into(), value));
    }

    pub fn csv(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.pairs {
            out.push_str(&format!("{k},{v}\n"));
        }
        out
    }

    pub fn json(&self) -> String {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.pairs {
            map.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map))
            .expect("kv serializes");
        s.push('\n');
        s
    }
}

impl Default for KvTable {
    fn default() -> Self {
        Self::new()
    }
}

pub fn estimate_table(est: &TruncEstimate, bits: u32) -> KvTable {
    let mut t = KvTable::new();
    t.push("regime", est.regime.name().into());
    t.push("formula", est.formula_id.into());
    t.push("n_star", fmt_real(&est.n_star, bits));
    t.push("r_star", fmt_real(&est.r_star, bits));
    t
}
