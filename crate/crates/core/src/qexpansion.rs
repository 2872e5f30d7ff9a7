//! Fourier coefficients of newforms.
//!
//! Coefficients come from one of two places: an eta quotient expanded exactly
//! as a formal power series, or an external coefficient file. Either way the
//! result is a [`QExpansion`] holding `a(1), …, a(M)` as unbounded integers,
//! which [`validate_hecke`] can check against the structure every newform has.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rug::Integer;

use crate::error::{Error, Result};

/// Sign of the functional equation `Λ(f,s) = ε Λ(f,k-s)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Parse `+1`, `1`, `-1`, or `unknown` (which yields `None`).
    pub fn parse_declared(s: &str) -> std::result::Result<Option<Sign>, String> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Some(Sign::Plus)),
            "-1" | "-" => Ok(Some(Sign::Minus)),
            "unknown" | "?" => Ok(None),
            other => Err(format!("sign must be +1, -1 or unknown, got `{other}`")),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A product `∏ η(d τ)^{r_d}` normalized so that it starts at `q^1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    factors: Vec<(u32, i32)>,
}

impl EtaQuotient {
    /// Validates the factor list and stores it sorted by divisor.
    pub fn new(mut factors: Vec<(u32, i32)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidEtaQuotient("no factors".into()));
        }
        factors.sort_by_key(|&(d, _)| d);
        for w in factors.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidEtaQuotient(format!(
                    "divisor {} appears more than once",
                    w[0].0
                )));
            }
        }
        for &(d, r) in &factors {
            if d == 0 {
                return Err(Error::InvalidEtaQuotient("divisors must be positive".into()));
            }
            if r == 0 {
                return Err(Error::InvalidEtaQuotient(format!(
                    "exponent of eta({d}τ) is zero"
                )));
            }
        }
        let order: i64 = factors.iter().map(|&(d, r)| d as i64 * r as i64).sum();
        if order != 24 {
            return Err(Error::InvalidEtaQuotient(format!(
                "sum of divisor × exponent is {order}, must be 24 so the expansion starts at q^1"
            )));
        }
        let exp_sum: i64 = factors.iter().map(|&(_, r)| r as i64).sum();
        if exp_sum <= 0 || exp_sum % 4 != 0 {
            return Err(Error::InvalidEtaQuotient(format!(
                "sum of exponents is {exp_sum}, must be twice an even positive weight"
            )));
        }
        Ok(Self { factors })
    }

    pub fn factors(&self) -> &[(u32, i32)] {
        &self.factors
    }

    /// Half the exponent sum.
    pub fn weight(&self) -> u32 {
        (self.factors.iter().map(|&(_, r)| r as i64).sum::<i64>() / 2) as u32
    }
}

impl FromStr for EtaQuotient {
    type Err = Error;

    /// Parses `"2^4 4^4"`; a bare `d` means exponent 1.
    fn from_str(s: &str) -> Result<Self> {
        let mut factors = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == '*' || c == ',') {
            if tok.is_empty() {
                continue;
            }
            let (d, r) = match tok.split_once('^') {
                Some((d, r)) => (d, r),
                None => (tok, "1"),
            };
            let d: u32 = d
                .trim()
                .parse()
                .map_err(|_| Error::InvalidEtaQuotient(format!("bad divisor in `{tok}`")))?;
            let r: i32 = r
                .trim()
                .parse()
                .map_err(|_| Error::InvalidEtaQuotient(format!("bad exponent in `{tok}`")))?;
            factors.push((d, r));
        }
        Self::new(factors)
    }
}

impl fmt::Display for EtaQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(d, r)| format!("{d}^{r}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Where a newform's coefficients come from.
#[derive(Clone, Debug, PartialEq)]
pub enum CoefficientSource {
    Eta(EtaQuotient),
    File(PathBuf),
    /// Coefficient-file contents held in memory.
    Text(String),
}

/// Identifies one newform.
#[derive(Clone, Debug, PartialEq)]
pub struct NewformSpec {
    pub weight: u32,
    pub level: u64,
    pub sign: Option<Sign>,
    pub source: CoefficientSource,
    pub label: String,
}

impl NewformSpec {
    pub fn new(
        weight: u32,
        level: u64,
        sign: Option<Sign>,
        source: CoefficientSource,
        label: impl Into<String>,
    ) -> Result<Self> {
        if weight < 4 || weight % 2 != 0 {
            return Err(Error::InvalidSpec(format!(
                "weight must be even and at least 4, got {weight}"
            )));
        }
        if level == 0 {
            return Err(Error::InvalidSpec("level must be positive".into()));
        }
        if let CoefficientSource::Eta(eta) = &source {
            if eta.weight() != weight {
                return Err(Error::InvalidSpec(format!(
                    "eta quotient {eta} has weight {}, spec declares {weight}",
                    eta.weight()
                )));
            }
        }
        Ok(Self {
            weight,
            level,
            sign,
            source,
            label: label.into(),
        })
    }

    /// `m = (k-2)/2`.
    pub fn m(&self) -> u32 {
        (self.weight - 2) / 2
    }

    /// Loads the coefficients. Eta recipes are expanded to `min_len`
    /// coefficients; files are read in full.
    pub fn load_expansion(&self, min_len: usize) -> Result<QExpansion> {
        match &self.source {
            CoefficientSource::Eta(eta) => expand_eta_quotient(eta, min_len.max(1)),
            CoefficientSource::File(path) => {
                let text = read_to_string(path)?;
                ingest_coefficients(&text, self)
            }
            CoefficientSource::Text(text) => ingest_coefficients(text, self),
        }
    }

    /// Parse a spec document or a coefficient file.
    ///
    /// Spec documents use `key: value` lines (`eta: 2^4 4^4`, `weight: 4`,
    /// `level: 8`, `sign: +1`, `label: …`, optionally `coefficients: path`).
    /// A document whose header uses `key=value` is treated as a coefficient
    /// file and becomes its own source. Relative coefficient paths resolve
    /// against `base_dir`.
    pub fn parse_document(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        if looks_like_coefficient_file(text) {
            let file = parse_coefficient_file(text)?;
            return Self::new(
                file.weight,
                file.level,
                file.sign,
                CoefficientSource::Text(text.to_string()),
                file.label,
            );
        }
        let mut weight = None;
        let mut level = None;
        let mut sign = None;
        let mut label = None;
        let mut eta = None;
        let mut coefficients = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once(':').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: format!("expected `key: value`, got `{line}`"),
            })?;
            let value = value.trim();
            let bad = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            match key.trim() {
                "weight" => weight = Some(value.parse::<u32>().map_err(|e| bad(format!("weight: {e}")))?),
                "level" => level = Some(value.parse::<u64>().map_err(|e| bad(format!("level: {e}")))?),
                "sign" => sign = Some(Sign::parse_declared(value).map_err(bad)?),
                "label" => label = Some(value.to_string()),
                "eta" => eta = Some(value.parse::<EtaQuotient>().map_err(|e| bad(e.to_string()))?),
                "coefficients" => coefficients = Some(PathBuf::from(value)),
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        let weight = weight.ok_or_else(|| Error::InvalidSpec("missing `weight`".into()))?;
        let level = level.ok_or_else(|| Error::InvalidSpec("missing `level`".into()))?;
        let source = match (eta, coefficients) {
            (Some(e), None) => CoefficientSource::Eta(e),
            (None, Some(p)) => {
                let p = match base_dir {
                    Some(dir) if p.is_relative() => dir.join(p),
                    _ => p,
                };
                CoefficientSource::File(p)
            }
            (Some(_), Some(_)) => {
                return Err(Error::InvalidSpec(
                    "give either `eta` or `coefficients`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidSpec(
                    "missing coefficient source (`eta` or `coefficients`)".into(),
                ))
            }
        };
        let label = label.unwrap_or_else(|| format!("{weight}.{level}"));
        Self::new(weight, level, sign.flatten(), source, label)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        Self::parse_document(&text, path.parent())
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => line[..pos].trim(),
        None => line.trim(),
    }
}

fn looks_like_coefficient_file(text: &str) -> bool {
    text.lines()
        .map(strip_comment)
        .find(|l| !l.is_empty())
        .map(|l| l.contains('=') || l.parse::<Integer>().is_ok())
        .unwrap_or(false)
}

/// Integer Fourier coefficients `a(1), …, a(M)` with `a(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    coefficients: Vec<Integer>,
}

impl QExpansion {
    pub fn new(coefficients: Vec<Integer>) -> Result<Self> {
        match coefficients.first() {
            None => Err(Error::Normalization("<empty>".into())),
            Some(a1) if *a1 != 1 => Err(Error::Normalization(a1.to_string())),
            Some(_) => Ok(Self { coefficients }),
        }
    }

    pub fn from_i64(values: &[i64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Integer::from(v)).collect())
    }

    /// The truncation `M`.
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `a(n)` for `1 ≤ n ≤ M`.
    pub fn a(&self, n: usize) -> &Integer {
        &self.coefficients[n - 1]
    }

    pub fn coefficients(&self) -> &[Integer] {
        &self.coefficients
    }

    pub fn truncated(&self, m: usize) -> Self {
        Self {
            coefficients: self.coefficients[..m.min(self.len()).max(1)].to_vec(),
        }
    }
}

fn mul_truncated(a: &[Integer], b: &[Integer], len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if *bj != 0 {
                out[i + j] += Integer::from(ai * bj);
            }
        }
    }
    out
}

/// Inverse of a series with constant term 1.
fn inverse_truncated(a: &[Integer], len: usize) -> Vec<Integer> {
    debug_assert_eq!(a[0], 1);
    let mut inv = vec![Integer::new(); len];
    inv[0] = Integer::from(1);
    for n in 1..len {
        let mut acc = Integer::new();
        for k in 1..=n.min(a.len() - 1) {
            acc += Integer::from(&a[k] * &inv[n - k]);
        }
        inv[n] = -acc;
    }
    inv
}

fn pow_truncated(base: &[Integer], mut e: u32, len: usize) -> Vec<Integer> {
    let mut result = vec![Integer::new(); len];
    result[0] = Integer::from(1);
    let mut base = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = mul_truncated(&result, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = mul_truncated(&base, &base, len);
        }
    }
    result
}

/// `∏_{n≥1} (1 - q^{d n})` to `len` terms, via Euler's pentagonal number theorem.
fn euler_product(d: u32, len: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); len];
    let d = d as usize;
    out[0] = Integer::from(1);
    for k in 1usize.. {
        let g1 = k * (3 * k - 1) / 2;
        let g2 = k * (3 * k + 1) / 2;
        if g1 * d >= len {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        out[g1 * d] += sign;
        if g2 * d < len {
            out[g2 * d] += sign;
        }
    }
    out
}

/// First `m` coefficients of the eta quotient, `a(1), …, a(m)`.
pub fn expand_eta_quotient(spec: &EtaQuotient, m: usize) -> Result<QExpansion> {
    if m == 0 {
        return Err(Error::InvalidEtaQuotient("truncation must be at least 1".into()));
    }
    let mut series = vec![Integer::new(); m];
    series[0] = Integer::from(1);
    for &(d, r) in spec.factors() {
        let base = euler_product(d, m);
        let base = if r < 0 { inverse_truncated(&base, m) } else { base };
        let powered = pow_truncated(&base, r.unsigned_abs(), m);
        series = mul_truncated(&series, &powered, m);
    }
    QExpansion::new(series)
}

/// A parsed coefficient file.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientFile {
    pub weight: u32,
    pub level: u64,
    pub sign: Option<Sign>,
    pub label: String,
    pub expansion: QExpansion,
}

/// Parse the line-oriented coefficient format: `key=value` header lines for
/// `weight`, `level`, `sign`, `label`, then one integer per line giving
/// `a(1), a(2), …`. `#` starts a comment.
pub fn parse_coefficient_file(text: &str) -> Result<CoefficientFile> {
    let mut weight = None;
    let mut level = None;
    let mut sign = None;
    let mut label = None;
    let mut body: Vec<Integer> = Vec::new();
    let mut first_body_line = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            if !body.is_empty() {
                return Err(Error::Parse {
                    line: lineno,
                    message: "header line after coefficient body".into(),
                });
            }
            let value = value.trim();
            let bad = |message: String| Error::Parse {
                line: lineno,
                message,
            };
            match key.trim() {
                "weight" => weight = Some(value.parse::<u32>().map_err(|e| bad(format!("weight: {e}")))?),
                "level" => level = Some(value.parse::<u64>().map_err(|e| bad(format!("level: {e}")))?),
                "sign" => sign = Some(Sign::parse_declared(value).map_err(bad)?),
                "label" => label = Some(value.to_string()),
                other => return Err(bad(format!("unknown header key `{other}`"))),
            }
            continue;
        }
        let value: Integer = line.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("expected an integer coefficient, got `{line}`"),
        })?;
        if first_body_line.is_none() {
            first_body_line = Some(lineno);
        }
        body.push(value);
    }
    let weight = weight.ok_or(Error::Parse {
        line: 1,
        message: "missing `weight=` header".into(),
    })?;
    let level = level.ok_or(Error::Parse {
        line: 1,
        message: "missing `level=` header".into(),
    })?;
    if body.is_empty() {
        return Err(Error::Parse {
            line: last_line.max(1),
            message: "no coefficients in body".into(),
        });
    }
    let expansion = QExpansion::new(body)?;
    Ok(CoefficientFile {
        weight,
        level,
        sign: sign.flatten(),
        label: label.unwrap_or_else(|| format!("{weight}.{level}")),
        expansion,
    })
}

/// Parse a coefficient file and check its metadata against `spec`.
pub fn ingest_coefficients(text: &str, spec: &NewformSpec) -> Result<QExpansion> {
    let file = parse_coefficient_file(text)?;
    if file.weight != spec.weight {
        return Err(Error::MetadataMismatch {
            field: "weight",
            declared: spec.weight.to_string(),
            found: file.weight.to_string(),
        });
    }
    if file.level != spec.level {
        return Err(Error::MetadataMismatch {
            field: "level",
            declared: spec.level.to_string(),
            found: file.level.to_string(),
        });
    }
    if let (Some(a), Some(b)) = (spec.sign, file.sign) {
        if a != b {
            return Err(Error::MetadataMismatch {
                field: "sign",
                declared: a.to_string(),
                found: b.to_string(),
            });
        }
    }
    Ok(file.expansion)
}

/// One failed structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeckeViolation {
    /// `a(mn) ≠ a(m) a(n)` for coprime `m, n`.
    Multiplicativity { m: usize, n: usize },
    /// `a(p^{r+1}) ≠ a(p) a(p^r) - p^{k-1} a(p^{r-1})` for `p ∤ N`.
    PrimeRecursion { p: usize, r: u32 },
    /// `|a(p)| > 2 p^{(k-1)/2}` for `p ∤ N`.
    Deligne { p: usize, value: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeReport {
    pub coprime_pairs_checked: usize,
    pub recursions_checked: usize,
    pub primes_checked: usize,
    pub violations: Vec<HeckeViolation>,
}

impl HeckeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn primes_up_to(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).collect()
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Check multiplicativity, the prime-power recursion and the Deligne bound on
/// every instance inside the truncation.
pub fn validate_hecke(q: &QExpansion, k: u32, level: u64) -> HeckeReport {
    let m_max = q.len();
    let mut report = HeckeReport::default();

    for m in 2..=m_max {
        for n in (m + 1)..=m_max / m {
            if gcd(m, n) != 1 {
                continue;
            }
            report.coprime_pairs_checked += 1;
            if *q.a(m * n) != Integer::from(q.a(m) * q.a(n)) {
                report.violations.push(HeckeViolation::Multiplicativity { m, n });
            }
        }
    }

    for p in primes_up_to(m_max) {
        if level % p as u64 == 0 {
            continue;
        }
        report.primes_checked += 1;
        let pk1 = Integer::from(Integer::u_pow_u(p as u32, k - 1));
        // a(p)^2 ≤ 4 p^{k-1}
        let lhs = Integer::from(q.a(p).square_ref());
        if lhs > Integer::from(&pk1 * 4u32) {
            report.violations.push(HeckeViolation::Deligne {
                p,
                value: q.a(p).to_string(),
            });
        }
        let mut prev = Integer::from(1); // a(p^{r-1})
        let mut pr = p; // p^r
        let mut r = 1u32;
        while let Some(next) = pr.checked_mul(p).filter(|&x| x <= m_max) {
            report.recursions_checked += 1;
            let expected = Integer::from(q.a(p) * q.a(pr)) - Integer::from(&pk1 * &prev);
            if *q.a(next) != expected {
                report.violations.push(HeckeViolation::PrimeRecursion { p, r });
            }
            prev = q.a(pr).clone();
            pr = next;
            r += 1;
        }
    }
    report
}
