use std::collections::HashMap;
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Deserialize;

use super::fp_poly;
use super::tower::TowerMap;
use super::{FieldCtx, GfError};
use crate::numtheory;

/// Field construction settings, loadable from a TOML file:
///
/// ```toml
/// table_max = 1048576      # largest field kept in log/antilog tables
/// size_cap_bits = 63       # refuse fields with more than 2^size_cap_bits elements
///
/// [[modulus]]              # optional per-(p, k) modulus overrides
/// p = 2
/// k = 4
/// coeffs = [1, 1, 0, 0, 1] # monic, constant term first
/// ```
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default = "default_table_max")]
    pub table_max: u64,
    #[serde(default = "default_size_cap_bits")]
    pub size_cap_bits: u32,
    #[serde(default, rename = "modulus")]
    pub overrides: Vec<ModulusOverride>,
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ModulusOverride {
    pub p: u64,
    pub k: u32,
    pub coeffs: Vec<u64>,
}

/// Hard ceiling for log tables regardless of configuration.
pub const TABLE_LIMIT: u64 = 1 << 26;

fn default_table_max() -> u64 {
    1 << 20
}

fn default_size_cap_bits() -> u32 {
    63
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            table_max: default_table_max(),
            size_cap_bits: default_size_cap_bits(),
            overrides: Vec::new(),
        }
    }
}

impl FieldConfig {
    pub fn from_toml_str(s: &str) -> Result<Self, GfError> {
        toml::from_str(s).map_err(|e| GfError::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self, GfError> {
        let text = std::fs::read_to_string(path).map_err(|e| GfError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    fn validate(&self) -> Result<(), GfError> {
        if self.table_max > TABLE_LIMIT {
            return Err(GfError::Config(format!("table_max {} exceeds 2^26", self.table_max)));
        }
        if self.size_cap_bits == 0 || self.size_cap_bits > 63 {
            return Err(GfError::Config("size_cap_bits must be in 1..=63".into()));
        }
        for o in &self.overrides {
            check_override(o)?;
        }
        Ok(())
    }
}

fn check_override(o: &ModulusOverride) -> Result<(), GfError> {
    let bad = |reason: &str| GfError::BadModulus { p: o.p, k: o.k, reason: reason.to_string() };
    if !numtheory::is_prime(o.p) {
        return Err(GfError::NotPrime(o.p));
    }
    if o.coeffs.len() != o.k as usize + 1 {
        return Err(bad("coefficient count must be k + 1"));
    }
    if o.coeffs.iter().any(|&c| c >= o.p) {
        return Err(bad("coefficients must be reduced mod p"));
    }
    if o.coeffs[o.k as usize] != 1 {
        return Err(bad("modulus must be monic"));
    }
    if !fp_poly::is_irreducible(o.p, &o.coeffs) {
        return Err(bad("modulus is reducible"));
    }
    Ok(())
}

/// Cache of constructed fields and embeddings; same `(p, k)` always yields the same field.
pub struct FieldRegistry {
    config: FieldConfig,
    fields: Mutex<HashMap<(u64, u32), Arc<FieldCtx>>>,
    embeddings: Mutex<HashMap<(u32, u32), Arc<TowerMap>>>,
}

impl FieldRegistry {
    pub fn new(config: FieldConfig) -> Result<Self, GfError> {
        config.validate()?;
        Ok(FieldRegistry {
            config,
            fields: Mutex::new(HashMap::new()),
            embeddings: Mutex::new(HashMap::new()),
        })
    }

    pub fn config(&self) -> &FieldConfig {
        &self.config
    }

    pub fn field(&self, p: u64, k: u32) -> Result<Arc<FieldCtx>, GfError> {
        if !numtheory::is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if k == 0 {
            return Err(GfError::ZeroDegree);
        }
        let cap = self.config.size_cap_bits;
        let too_big = match p.checked_pow(k) {
            Some(size) => (size as u128) > (1u128 << cap),
            None => true,
        };
        if too_big {
            return Err(GfError::SizeCap { p, k, cap_bits: cap });
        }
        if let Some(f) = self.fields.lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let modulus = match self.config.overrides.iter().find(|o| o.p == p && o.k == k) {
            Some(o) => o.coeffs.clone(),
            None => fp_poly::smallest_primitive(p, k),
        };
        let ctx = Arc::new(FieldCtx::from_modulus(p, k, modulus, self.config.table_max)?);
        // a concurrent builder may have won the race; keep the first entry
        let mut guard = self.fields.lock().unwrap();
        Ok(guard.entry((p, k)).or_insert(ctx).clone())
    }

    /// Embedding of `src` into `dst`, cached per field pair.
    pub fn embedding(&self, src: &Arc<FieldCtx>, dst: &Arc<FieldCtx>) -> Result<Arc<TowerMap>, GfError> {
        let key = (src.id(), dst.id());
        if let Some(m) = self.embeddings.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let map = Arc::new(TowerMap::new(src.clone(), dst.clone())?);
        Ok(self.embeddings.lock().unwrap().entry(key).or_insert(map).clone())
    }
}

static GLOBAL: OnceLock<FieldRegistry> = OnceLock::new();

/// Installs the process-wide configuration. Fails if fields were already requested.
pub fn install_global_config(config: FieldConfig) -> Result<(), GfError> {
    let reg = FieldRegistry::new(config)?;
    GLOBAL
        .set(reg)
        .map_err(|_| GfError::Config("global field registry already initialised".into()))
}

pub fn global_registry() -> &'static FieldRegistry {
    GLOBAL.get_or_init(|| FieldRegistry::new(FieldConfig::default()).expect("default config is valid"))
}

/// The canonical field `F_{p^k}` from the global registry.
pub fn build_field(p: u64, k: u32) -> Result<Arc<FieldCtx>, GfError> {
    global_registry().field(p, k)
}
