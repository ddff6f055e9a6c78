//! Job configuration: CLI flags layered over an optional flat key=value
//! config file over defaults, resolved into a canonical JobConfig whose
//! content hash names the report.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use hamkac::dpsuper::MonoIdx;
use hamkac::kacmod::{Character, ChiType};
use hamkac::{Prime, ShapeParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Gr,
    Osp,
    ModuleLaw,
    ChiReduced,
    Meataxe,
    Hom,
    Classify,
}

impl Check {
    pub fn parse_list(s: &str) -> Result<Vec<Check>, String> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "gr" => out.push(Check::Gr),
                "osp" => out.push(Check::Osp),
                "module_law" => out.push(Check::ModuleLaw),
                "chi_reduced" => out.push(Check::ChiReduced),
                "meataxe" => out.push(Check::Meataxe),
                "hom" => out.push(Check::Hom),
                "classify" => out.push(Check::Classify),
                "all" => {
                    out.extend([
                        Check::Gr,
                        Check::Osp,
                        Check::ModuleLaw,
                        Check::ChiReduced,
                        Check::Classify,
                    ]);
                }
                other => return Err(format!("unknown check: {other}")),
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Full,
    Sampled,
}

/// A character request: canonical type or explicit values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChiSpec {
    pub name: String,
    /// abbreviated values (d1, d2) plus explicit even-basis entries
    pub d1: i64,
    pub d2: i64,
    pub extra: Vec<((u32, u32), i64)>,
}

impl ChiSpec {
    pub fn of_type(tag: ChiType) -> Self {
        let (d1, d2) = match tag {
            ChiType::I => (1, 1),
            ChiType::II => (1, 0),
            ChiType::III => (0, 1),
            ChiType::Custom => (0, 0),
        };
        ChiSpec { name: tag.to_string(), d1, d2, extra: Vec::new() }
    }

    /// Parse "I", "II", "III", or "custom:d1=1,d2=0,h=2,e2_0=1" where
    /// eA_B assigns χ on the even basis element D_H(x1^(A) x2^(B)).
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "I" => return Ok(ChiSpec::of_type(ChiType::I)),
            "II" => return Ok(ChiSpec::of_type(ChiType::II)),
            "III" => return Ok(ChiSpec::of_type(ChiType::III)),
            _ => {}
        }
        let Some(body) = s.strip_prefix("custom:") else {
            return Err(format!("unknown chi spec: {s} (expected I, II, III or custom:...)"));
        };
        let mut spec = ChiSpec { name: s.to_string(), d1: 0, d2: 0, extra: Vec::new() };
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let Some((key, val)) = part.split_once('=') else {
                return Err(format!("bad chi assignment: {part}"));
            };
            let val: i64 =
                val.trim().parse().map_err(|_| format!("bad chi value in: {part}"))?;
            match key.trim() {
                "d1" => spec.d1 = val,
                "d2" => spec.d2 = val,
                "h" => spec.extra.push(((1, 1), val)),
                k if k.starts_with('e') && k.contains('_') => {
                    let Some((a, b)) = k[1..].split_once('_') else {
                        return Err(format!("bad even-basis key: {k}"));
                    };
                    let i1: u32 = a.trim().parse().map_err(|_| format!("bad index in {k}"))?;
                    let i2: u32 = b.trim().parse().map_err(|_| format!("bad index in {k}"))?;
                    spec.extra.push(((i1, i2), val));
                }
                other => return Err(format!("unknown chi key: {other}")),
            }
        }
        Ok(spec)
    }

    pub fn character(&self, shape: ShapeParams) -> Result<Character, String> {
        let mut chi = Character::from_abbrev(shape, self.d1, self.d2);
        for &((i1, i2), v) in &self.extra {
            let m = MonoIdx::new(i1, i2, 0);
            if m.degree() < 1 || !shape.contains(m) {
                return Err(format!("chi entry e({i1},{i2}) outside the even basis"));
            }
            chi.set(m, v);
        }
        Ok(chi)
    }
}

/// Fully resolved job configuration.
#[derive(Debug, Clone, Serialize)]
pub struct JobConfig {
    pub p: u64,
    pub t1: u32,
    pub t2: u32,
    pub chi: Vec<ChiSpec>,
    pub lambdas: Vec<u64>,
    pub checks: Vec<Check>,
    pub mode: Mode,
    pub seed: u64,
    pub allow_any_height: bool,
    #[serde(skip)]
    pub cache_dir: Option<PathBuf>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub emit_json: bool,
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl JobConfig {
    pub fn shape(&self) -> Result<ShapeParams, String> {
        let p = Prime::new(self.p).map_err(|_| format!("p must be prime > 3, got {}", self.p))?;
        ShapeParams::new(p, self.t1, self.t2)
            .map_err(|e| format!("bad shape: {e}"))
    }

    /// Content hash over the mathematically relevant fields; names the
    /// report file.
    pub fn content_hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialization");
        hamkac::cache::sha256_hex(canonical.as_bytes())[..16].to_string()
    }
}

/// Raw option set before precedence resolution; every field optional.
#[derive(Debug, Default, Clone)]
pub struct RawOptions {
    pub p: Option<u64>,
    pub t: Option<String>,
    pub chi: Option<String>,
    pub lambda: Option<String>,
    pub checks: Option<String>,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub cache: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub json: Option<bool>,
    pub workers: Option<usize>,
    pub allow_any_height: Option<bool>,
}

impl RawOptions {
    /// other fills in fields missing here (self takes precedence).
    pub fn or(mut self, other: RawOptions) -> RawOptions {
        self.p = self.p.or(other.p);
        self.t = self.t.or(other.t);
        self.chi = self.chi.or(other.chi);
        self.lambda = self.lambda.or(other.lambda);
        self.checks = self.checks.or(other.checks);
        self.mode = self.mode.or(other.mode);
        self.seed = self.seed.or(other.seed);
        self.cache = self.cache.or(other.cache);
        self.out = self.out.or(other.out);
        self.json = self.json.or(other.json);
        self.workers = self.workers.or(other.workers);
        self.allow_any_height = self.allow_any_height.or(other.allow_any_height);
        self
    }

    /// Parse a flat key = value config file.
    pub fn from_file(path: &std::path::Path) -> Result<RawOptions, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut map = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(format!("{}:{}: expected key = value", path.display(), no + 1));
            };
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let mut raw = RawOptions::default();
        for (k, v) in map {
            match k.as_str() {
                "p" => raw.p = Some(v.parse().map_err(|_| format!("bad p: {v}"))?),
                "t" => raw.t = Some(v),
                "chi" => raw.chi = Some(v),
                "lambda" => raw.lambda = Some(v),
                "checks" => raw.checks = Some(v),
                "mode" => raw.mode = Some(v),
                "seed" => raw.seed = Some(v.parse().map_err(|_| format!("bad seed: {v}"))?),
                "cache" => raw.cache = Some(PathBuf::from(v)),
                "out" => raw.out = Some(PathBuf::from(v)),
                "json" => raw.json = Some(parse_bool(&v)?),
                "workers" => {
                    raw.workers = Some(v.parse().map_err(|_| format!("bad workers: {v}"))?)
                }
                "allow_any_height" => raw.allow_any_height = Some(parse_bool(&v)?),
                other => return Err(format!("unknown config key: {other}")),
            }
        }
        Ok(raw)
    }

    pub fn resolve(self) -> Result<JobConfig, String> {
        let p = self.p.ok_or("p is required (--p or config file)")?;
        let (t1, t2) = match self.t.as_deref() {
            None => (1, 1),
            Some(s) => {
                let Some((a, b)) = s.split_once(',') else {
                    return Err(format!("bad --t value: {s} (expected A,B)"));
                };
                (
                    a.trim().parse().map_err(|_| format!("bad t1: {a}"))?,
                    b.trim().parse().map_err(|_| format!("bad t2: {b}"))?,
                )
            }
        };
        let chi = match self.chi.as_deref() {
            None => vec![
                ChiSpec::of_type(ChiType::I),
                ChiSpec::of_type(ChiType::II),
                ChiSpec::of_type(ChiType::III),
            ],
            Some(s) => {
                // custom specs contain commas inside; split on commas not
                // inside a custom:... tail by splitting on ",I" boundaries
                // is fragile, so use ';' as the list separator too
                let mut specs = Vec::new();
                for part in split_chi_list(s) {
                    specs.push(ChiSpec::parse(&part)?);
                }
                if specs.is_empty() {
                    return Err("empty chi list".into());
                }
                specs
            }
        };
        let lambdas = match self.lambda.as_deref() {
            None | Some("all") => (0..p).collect(),
            Some(list) => {
                let mut out = Vec::new();
                for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let v: u64 = item.parse().map_err(|_| format!("bad lambda: {item}"))?;
                    if v >= p {
                        return Err(format!("lambda {v} outside [0, p)"));
                    }
                    out.push(v);
                }
                out.sort();
                out.dedup();
                out
            }
        };
        let checks = Check::parse_list(self.checks.as_deref().unwrap_or("all"))?;
        let mode = match self.mode.as_deref() {
            None | Some("sampled") => Mode::Sampled,
            Some("full") => Mode::Full,
            Some(other) => return Err(format!("bad mode: {other}")),
        };
        // HAMKAC_CACHE overrides --cache
        let cache_dir = std::env::var_os("HAMKAC_CACHE")
            .map(PathBuf::from)
            .or(self.cache);
        Ok(JobConfig {
            p,
            t1,
            t2,
            chi,
            lambdas,
            checks,
            mode,
            seed: self.seed.unwrap_or(0),
            allow_any_height: self.allow_any_height.unwrap_or(false),
            cache_dir,
            out: self.out,
            emit_json: self.json.unwrap_or(false),
            workers: self.workers,
        })
    }
}

/// Split a chi list: items separated by ';' or by ',' when the comma is not
/// inside a custom:... item.
fn split_chi_list(s: &str) -> Vec<String> {
    if s.contains(';') {
        return s.split(';').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect();
    }
    let mut out = Vec::new();
    let mut current = String::new();
    for piece in s.split(',') {
        let piece = piece.trim();
        if current.is_empty() {
            current = piece.to_string();
        } else if piece.contains('=') || piece.ends_with(')') || current.ends_with('(') {
            // continuation of a custom:... item
            current.push(',');
            current.push_str(piece);
        } else {
            out.push(current.clone());
            current = piece.to_string();
        }
        // a complete canonical item can be flushed immediately
        if matches!(current.as_str(), "I" | "II" | "III") {
            out.push(current.clone());
            current.clear();
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(format!("bad boolean: {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_parsing() {
        assert_eq!(ChiSpec::parse("I").unwrap().name, "I");
        let c = ChiSpec::parse("custom:d1=2,h=1").unwrap();
        assert_eq!(c.d1, 2);
        assert_eq!(c.extra, vec![((1, 1), 1)]);
        assert!(ChiSpec::parse("IV").is_err());
        let c = ChiSpec::parse("custom:e2_0=3").unwrap();
        assert_eq!(c.extra, vec![((2, 0), 3)]);
    }

    #[test]
    fn chi_list_split() {
        assert_eq!(split_chi_list("I,II,III"), vec!["I", "II", "III"]);
        assert_eq!(split_chi_list("I,custom:d1=1,d2=0"), vec!["I", "custom:d1=1,d2=0"]);
        assert_eq!(split_chi_list("custom:d1=1;custom:d2=1"), vec!["custom:d1=1", "custom:d2=1"]);
    }

    #[test]
    fn precedence_and_hash() {
        let cli = RawOptions { p: Some(5), seed: Some(9), ..Default::default() };
        let file = RawOptions { p: Some(7), t: Some("1,2".into()), ..Default::default() };
        let merged = cli.or(file);
        assert_eq!(merged.p, Some(5)); // CLI wins
        assert_eq!(merged.t.as_deref(), Some("1,2")); // file fills gaps
        let cfg = merged.resolve().unwrap();
        assert_eq!((cfg.p, cfg.t1, cfg.t2, cfg.seed), (5, 1, 2, 9));
        let h1 = cfg.content_hash();
        let mut cfg2 = cfg.clone();
        cfg2.seed = 10;
        assert_ne!(h1, cfg2.content_hash());
    }
}
