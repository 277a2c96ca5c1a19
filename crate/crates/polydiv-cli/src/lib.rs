//! JSON document schemas and command implementations behind the `polydiv`
//! binary.  The binary itself only parses arguments, reads files and prints;
//! everything testable lives here.
//!
//! Numbers: lattice coordinates are JSON integers, rationals are strings
//! "p/q" (or "p" for integers).  Output objects use alphabetically ordered
//! keys throughout, so serialized documents are diff-stable.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use polydiv::error::Error;
use polydiv::hyperorder::{
    leq_hyper, leq_pointwise_p1, leq_pointwise_sound, min_singular_set, Certificate, OrderVerdict,
    Relation,
};
use polydiv::lattice::{format_rat, parse_rat, Int, IVec, QVec};
use polydiv::pdivisor::{Curve, DivisorialFan, HypPoint, LocusKind, PolyDivisor, SPINE};
use polydiv::polyhedra::{Cone, Fan, Polyhedron};
use polydiv::resolve::{
    certify_non_essential, exceptional_classification, ResolutionWitness,
};
use polydiv::valsets::{
    minimal_valuations, nash_set, terminal_set, trinomial_nash_criterion, SetKind, TrinomialData,
    ValuationSet,
};

/// Errors of the command layer, tagged with the process exit code dictated
/// by the interface contract: 1 schema, 2 not proper, 3 genus-0 guard,
/// 4 incomplete enumeration under --strict.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn schema(msg: impl Into<String>) -> CliError {
        CliError { code: 1, message: msg.into() }
    }

    pub fn incomplete(msg: impl Into<String>) -> CliError {
        CliError { code: 4, message: msg.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let code = match &e {
            Error::NotProper(_) => 2,
            Error::GenusZeroSingularLocus | Error::GenusZeroOpenProblem => 3,
            _ => 1,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn int_to_i64(n: &Int) -> CliResult<i64> {
    n.to_i64().ok_or_else(|| CliError::schema("coordinate exceeds the document integer range"))
}

fn ivec_to_doc(v: &[Int]) -> CliResult<Vec<i64>> {
    v.iter().map(int_to_i64).collect()
}

fn ivec_from_doc(v: &[i64]) -> IVec {
    v.iter().map(|&x| Int::from(x)).collect()
}

// ---------------------------------------------------------------------------
// Input documents

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveDoc {
    pub genus: u32,
    pub points: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConeDoc {
    pub rays: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyhedronDoc {
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<i64>>,
}

/// The on-disk form of a polyhedral divisor.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct InputDocument {
    pub rank: usize,
    pub curve: CurveDoc,
    pub tail: ConeDoc,
    /// Map point label → coefficient; `null` is the empty coefficient
    /// (point excluded from an affine locus).
    pub coefficients: BTreeMap<String, Option<PolyhedronDoc>>,
    pub locus: String,
}

impl PolyhedronDoc {
    pub fn to_polyhedron(&self, ambient: usize) -> CliResult<Polyhedron> {
        let mut vertices: Vec<QVec> = Vec::new();
        for v in &self.vertices {
            if v.len() != ambient {
                return Err(CliError::schema("vertex has wrong dimension"));
            }
            vertices.push(v.iter().map(|s| parse_rat(s)).collect::<Result<_, _>>()?);
        }
        let rays: Vec<IVec> = self.rays.iter().map(|r| ivec_from_doc(r)).collect();
        Ok(Polyhedron::from_vrep(ambient, &vertices, &rays))
    }

    pub fn from_polyhedron(p: &Polyhedron) -> CliResult<PolyhedronDoc> {
        Ok(PolyhedronDoc {
            vertices: p
                .vertices
                .iter()
                .map(|v| v.iter().map(format_rat).collect())
                .collect(),
            rays: p.rays.iter().map(|r| ivec_to_doc(r)).collect::<CliResult<_>>()?,
        })
    }
}

impl InputDocument {
    pub fn parse(text: &str) -> CliResult<InputDocument> {
        serde_json::from_str(text).map_err(|e| CliError::schema(format!("malformed document: {e}")))
    }

    pub fn to_divisor(&self) -> CliResult<PolyDivisor> {
        let curve = Curve::new(self.curve.genus, self.curve.points.clone())?;
        let rays: Vec<IVec> = self.tail.rays.iter().map(|r| ivec_from_doc(r)).collect();
        if rays.iter().any(|r| r.len() != self.rank) {
            return Err(CliError::schema("tail ray has wrong dimension"));
        }
        let tail = Cone::from_rays(self.rank, &rays);
        let mut coeffs = BTreeMap::new();
        for (y, c) in &self.coefficients {
            let p = match c {
                Some(doc) => doc.to_polyhedron(self.rank)?,
                None => Polyhedron::empty(self.rank),
            };
            coeffs.insert(y.clone(), p);
        }
        let locus = match self.locus.as_str() {
            "affine" => LocusKind::Affine,
            "complete" => LocusKind::Complete,
            other => return Err(CliError::schema(format!("unknown locus {other:?}"))),
        };
        Ok(PolyDivisor::new(self.rank, tail, curve, coeffs, locus)?)
    }

    pub fn from_divisor(d: &PolyDivisor) -> CliResult<InputDocument> {
        let mut coefficients = BTreeMap::new();
        for (y, p) in &d.coeffs {
            let c = if p.is_empty() {
                None
            } else {
                Some(PolyhedronDoc::from_polyhedron(p)?)
            };
            coefficients.insert(y.clone(), c);
        }
        Ok(InputDocument {
            rank: d.rank,
            curve: CurveDoc { genus: d.curve.genus, points: d.curve.points.clone() },
            tail: ConeDoc {
                rays: d.tail.rays.iter().map(|r| ivec_to_doc(r)).collect::<CliResult<_>>()?,
            },
            coefficients,
            locus: match d.locus {
                LocusKind::Affine => "affine".into(),
                LocusKind::Complete => "complete".into(),
            },
        })
    }
}

// ---------------------------------------------------------------------------
// Valuation documents

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValuationDocument {
    /// Curve point label, or `null` for a spine (height-zero) valuation.
    pub page: Option<String>,
    pub a: Vec<i64>,
    pub b: i64,
}

impl ValuationDocument {
    pub fn to_hyp_point(&self) -> CliResult<HypPoint> {
        if self.b < 0 {
            return Err(CliError::schema("height b must be nonnegative"));
        }
        if (self.b == 0) != self.page.is_none() {
            return Err(CliError::schema("b = 0 exactly for spine valuations (page null)"));
        }
        let a = ivec_from_doc(&self.a);
        match &self.page {
            None => Ok(HypPoint::spine(a)),
            Some(y) => Ok(HypPoint::page_point(y, a, Int::from(self.b))?),
        }
    }

    pub fn from_hyp_point(nu: &HypPoint) -> CliResult<ValuationDocument> {
        Ok(ValuationDocument {
            page: if nu.is_spine() { None } else { Some(nu.page.clone()) },
            a: ivec_to_doc(&nu.a)?,
            b: int_to_i64(&nu.b)?,
        })
    }
}

/// Compact display form: `[•,(1,0),0]`, `[0,2,1]` for rank one.
pub fn format_valuation(nu: &HypPoint) -> String {
    let a: Vec<String> = nu.a.iter().map(|x| x.to_string()).collect();
    let a = if a.len() == 1 { a.join(",") } else { format!("({})", a.join(",")) };
    format!("[{},{},{}]", nu.page, a, nu.b)
}

/// Parse a valuation given either as a JSON document or in the compact form
/// `[page,a,b]` / `[page,(a1,a2),b]`, tolerating the unicode minus sign.
pub fn parse_valuation(text: &str) -> CliResult<HypPoint> {
    let t = text.trim().replace('\u{2212}', "-");
    if t.starts_with('{') {
        let doc: ValuationDocument = serde_json::from_str(&t)
            .map_err(|e| CliError::schema(format!("malformed valuation: {e}")))?;
        return doc.to_hyp_point();
    }
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| CliError::schema(format!("malformed valuation {text:?}")))?;
    let mut tokens: Vec<String> = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth = depth
                    .checked_sub(1)
                    .ok_or_else(|| CliError::schema("unbalanced parentheses"))?;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                tokens.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    tokens.push(cur.trim().to_string());
    if tokens.len() < 3 {
        return Err(CliError::schema(format!("malformed valuation {text:?}")));
    }
    let page = tokens[0].clone();
    let b: i64 = tokens[tokens.len() - 1]
        .parse()
        .map_err(|_| CliError::schema("malformed height"))?;
    let mid = &tokens[1..tokens.len() - 1];
    let a_tokens: Vec<String> = if mid.len() == 1 && mid[0].starts_with('(') {
        mid[0]
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(',')
            .map(|s| s.trim().to_string())
            .collect()
    } else {
        mid.to_vec()
    };
    let mut a = Vec::new();
    for s in &a_tokens {
        a.push(Int::from(
            s.parse::<i64>().map_err(|_| CliError::schema("malformed coordinate"))?,
        ));
    }
    if b < 0 {
        return Err(CliError::schema("height b must be nonnegative"));
    }
    let spine = page == SPINE || page == "null" || page == "spine";
    if spine != (b == 0) {
        return Err(CliError::schema("b = 0 exactly for spine valuations"));
    }
    if spine {
        Ok(HypPoint::spine(a))
    } else {
        Ok(HypPoint::page_point(&page, a, Int::from(b))?)
    }
}

// ---------------------------------------------------------------------------
// Reports

/// A command result: a JSON value and a plain-text rendering with identical
/// content.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub text: String,
    /// Set when the result rests on a cut-short enumeration or an unknown
    /// verdict; --strict turns it into exit code 4.
    pub incomplete: Option<String>,
}

impl Report {
    pub fn render(&self, format: &str) -> String {
        match format {
            "json" => serde_json::to_string_pretty(&self.json).expect("serializable value"),
            _ => self.text.clone(),
        }
    }
}

fn set_kind_name(kind: SetKind) -> &'static str {
    match kind {
        SetKind::Nash => "nash",
        SetKind::Essential => "essential",
        SetKind::Terminal => "terminal",
        SetKind::MinimalConfirmed => "minimal-confirmed",
        SetKind::MinimalCandidates => "minimal-candidates",
    }
}

fn set_to_json(s: &ValuationSet) -> CliResult<Value> {
    let elements: Vec<Value> = s
        .elements
        .iter()
        .map(|nu| Ok(serde_json::to_value(ValuationDocument::from_hyp_point(nu)?).unwrap()))
        .collect::<CliResult<_>>()?;
    Ok(json!({
        "kind": set_kind_name(s.kind),
        "complete": s.complete,
        "elements": elements,
        "note": s.note,
    }))
}

fn set_to_text(s: &ValuationSet) -> String {
    let mut out = format!(
        "{} ({} element{}, {})\n",
        set_kind_name(s.kind),
        s.elements.len(),
        if s.elements.len() == 1 { "" } else { "s" },
        if s.complete { "complete" } else { "incomplete" },
    );
    for nu in &s.elements {
        out.push_str(&format_valuation(nu));
        out.push('\n');
    }
    if let Some(n) = &s.note {
        out.push_str(&format!("note: {n}\n"));
    }
    out
}

fn set_report(s: &ValuationSet) -> CliResult<Report> {
    Ok(Report {
        json: set_to_json(s)?,
        text: set_to_text(s),
        incomplete: if s.complete {
            None
        } else {
            Some("enumeration bound reached before completeness".into())
        },
    })
}

// ---------------------------------------------------------------------------
// Commands

pub fn cmd_nash(d: &PolyDivisor, bound: Option<i64>) -> CliResult<Report> {
    let set = match bound {
        None => nash_set(d)?,
        Some(n) => {
            if d.locus == LocusKind::Complete && d.curve.genus == 0 {
                return Err(Error::GenusZeroOpenProblem.into());
            }
            let ms = min_singular_set(d, Some(Int::from(n)))?;
            let mut elements = ms.elements;
            elements.sort_by_key(|nu| (!nu.is_spine(), nu.clone()));
            ValuationSet { kind: SetKind::Nash, elements, complete: ms.complete, note: None }
        }
    };
    set_report(&set)
}

pub fn cmd_terminal(d: &PolyDivisor) -> CliResult<Report> {
    set_report(&terminal_set(d)?)
}

pub fn cmd_minimal(d: &PolyDivisor) -> CliResult<Report> {
    let (confirmed, candidates) = minimal_valuations(d)?;
    let json = json!({
        "candidates": set_to_json(&candidates)?,
        "confirmed": set_to_json(&confirmed)?,
    });
    let text = format!("{}{}", set_to_text(&confirmed), set_to_text(&candidates));
    let incomplete = if confirmed.complete && candidates.complete {
        None
    } else {
        Some("enumeration bound reached before completeness".into())
    };
    Ok(Report { json, text, incomplete })
}

pub fn cmd_singular(d: &PolyDivisor, nu: &HypPoint) -> CliResult<Report> {
    let singular = d.singular_center(nu)?;
    Ok(Report {
        json: json!({ "singular": singular, "valuation": serde_json::to_value(ValuationDocument::from_hyp_point(nu)?).unwrap() }),
        text: format!("{} is {}\n", format_valuation(nu), if singular { "singular" } else { "smooth" }),
        incomplete: None,
    })
}

fn certificate_json(c: &Certificate) -> CliResult<Value> {
    Ok(match c {
        Certificate::Membership(v) => json!({"membership": ivec_to_doc(v)?}),
        Certificate::Separation(v) => json!({"separation": ivec_to_doc(v)?}),
        Certificate::Note(n) => json!({"note": n}),
    })
}

fn certificate_text(c: &Certificate) -> String {
    let fmt = |v: &IVec| {
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("({})", s.join(","))
    };
    match c {
        Certificate::Membership(v) => format!("membership {}", fmt(v)),
        Certificate::Separation(v) => format!("separation {}", fmt(v)),
        Certificate::Note(n) => format!("note: {n}"),
    }
}

pub fn cmd_order(
    d: &PolyDivisor,
    rel: &str,
    lhs: &HypPoint,
    rhs: &HypPoint,
) -> CliResult<Report> {
    let verdict: OrderVerdict = match rel {
        "hyper" => leq_hyper(lhs, rhs, d)?,
        "pointwise" => {
            if d.curve.genus == 0 {
                leq_pointwise_p1(lhs, rhs, d)?
            } else {
                leq_pointwise_sound(lhs, rhs, d)?
            }
        }
        other => return Err(CliError::schema(format!("unknown relation {other:?}"))),
    };
    let relation = match verdict.relation {
        Relation::True => "true",
        Relation::False => "false",
        Relation::Unknown => "unknown",
    };
    let json = json!({
        "certificate": match &verdict.certificate {
            Some(c) => certificate_json(c)?,
            None => Value::Null,
        },
        "lhs": serde_json::to_value(ValuationDocument::from_hyp_point(lhs)?).unwrap(),
        "relation": relation,
        "rhs": serde_json::to_value(ValuationDocument::from_hyp_point(rhs)?).unwrap(),
    });
    let mut text = format!(
        "{} <= {} [{}]: {}\n",
        format_valuation(lhs),
        format_valuation(rhs),
        rel,
        relation,
    );
    if let Some(c) = &verdict.certificate {
        text.push_str(&format!("certificate: {}\n", certificate_text(c)));
    }
    Ok(Report {
        json,
        text,
        incomplete: if verdict.relation == Relation::Unknown {
            Some("order relation undecided by the sound test".into())
        } else {
            None
        },
    })
}

fn fan_to_json(fan: &Fan) -> CliResult<Value> {
    let maximal: Vec<Value> = fan
        .maximal_cones()
        .iter()
        .map(|c| {
            let rays: Vec<Vec<i64>> =
                c.rays.iter().map(|r| ivec_to_doc(r)).collect::<CliResult<_>>()?;
            Ok(json!(rays))
        })
        .collect::<CliResult<_>>()?;
    Ok(json!({"ambient": fan.ambient, "maximal_cones": maximal}))
}

fn divisorial_fan_to_json(e: &DivisorialFan) -> CliResult<Value> {
    let divisors: Vec<Value> = e
        .divisors
        .iter()
        .map(|d| Ok(serde_json::to_value(InputDocument::from_divisor(d)?).unwrap()))
        .collect::<CliResult<_>>()?;
    Ok(json!({"divisors": divisors, "rank": e.rank}))
}

fn exc_table_to_json(table: &[(Option<String>, Cone)]) -> CliResult<Value> {
    let rows: Vec<Value> = table
        .iter()
        .map(|(page, c)| {
            let rays: Vec<Vec<i64>> =
                c.rays.iter().map(|r| ivec_to_doc(r)).collect::<CliResult<_>>()?;
            Ok(json!({"page": page, "rays": rays}))
        })
        .collect::<CliResult<_>>()?;
    Ok(json!(rows))
}

pub fn witness_to_json(w: &ResolutionWitness) -> CliResult<Value> {
    let pages: Vec<Value> = w
        .pages
        .iter()
        .map(|(y, fan)| Ok(json!({"fan": fan_to_json(fan)?, "point": y})))
        .collect::<CliResult<_>>()?;
    Ok(json!({
        "divisorial_fan": divisorial_fan_to_json(&w.efan)?,
        "exceptional_toroidal": exc_table_to_json(&w.exc_toroidal)?,
        "exceptional_x": exc_table_to_json(&w.exc_x)?,
        "pages": pages,
        "tail_fan": fan_to_json(&w.tail_fan)?,
    }))
}

pub fn cmd_resolve(d: &PolyDivisor, nu: &HypPoint) -> CliResult<Report> {
    let w = certify_non_essential(nu, d)?;
    let class = exceptional_classification(nu, &w)?;
    let mut json = witness_to_json(&w)?;
    json.as_object_mut().expect("witness object").insert(
        "classification".into(),
        json!({
            "over_toroidification": class.over_toroidification,
            "over_x": class.over_x,
            "valuation": serde_json::to_value(ValuationDocument::from_hyp_point(nu)?).unwrap(),
        }),
    );
    let mut text = format!("resolution witness avoiding {}\n", format_valuation(nu));
    for (y, fan) in &w.pages {
        text.push_str(&format!(
            "page {}: {} maximal cones, smooth\n",
            y,
            fan.maximal_cones().len()
        ));
    }
    text.push_str(&format!(
        "divisorial fan: {} divisors; exceptional cones: {} (toroidal), {} (over X)\n",
        w.efan.divisors.len(),
        w.exc_toroidal.len(),
        w.exc_x.len()
    ));
    text.push_str(&format!(
        "classification: over toroidification = {}, over X = {}\n",
        class.over_toroidification, class.over_x
    ));
    Ok(Report { json, text, incomplete: None })
}

/// Parse `--blocks "1,1;2;5"` into the three exponent blocks.
pub fn parse_blocks(text: &str) -> CliResult<TrinomialData> {
    let t = text.trim().replace('\u{2212}', "-");
    let parts: Vec<&str> = t.split(';').collect();
    if parts.len() != 3 {
        return Err(CliError::schema("expected three semicolon-separated blocks"));
    }
    let mut blocks: Vec<Vec<Int>> = Vec::new();
    for p in parts {
        let mut block = Vec::new();
        for s in p.split(',') {
            let n: i64 = s
                .trim()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .parse()
                .map_err(|_| CliError::schema("malformed exponent"))?;
            block.push(Int::from(n));
        }
        blocks.push(block);
    }
    let [b0, b1, b2]: [Vec<Int>; 3] = blocks.try_into().expect("three blocks");
    Ok(TrinomialData::new([b0, b1, b2])?)
}

pub fn cmd_trinomial(t: &TrinomialData) -> CliResult<Report> {
    let v = trinomial_nash_criterion(t);
    let json = json!({
        "d": int_to_i64(&v.d)?,
        "d1": int_to_i64(&v.d1)?,
        "d2": int_to_i64(&v.d2)?,
        "d3": int_to_i64(&v.d3)?,
        "holds": v.holds,
        "u": int_to_i64(&v.u)?,
        "value": int_to_i64(&v.value)?,
    });
    let value = v.value.to_string().replace('-', "\u{2212}");
    let text = format!(
        "{}: u \u{2212} d\u{2081} \u{2212} d\u{2082} \u{2212} d\u{2083} = {}\n",
        if v.holds { "holds" } else { "fails" },
        value,
    );
    Ok(Report { json, text, incomplete: None })
}

/// Properness guard applied by the binary before every divisor command.
/// Degrees pending a principal-multiple check (positive genus, zero total
/// degree on some dual ray) are accepted; only an outright violation fails.
pub fn require_proper(d: &PolyDivisor) -> CliResult<()> {
    match d.is_proper() {
        polydiv::pdivisor::Properness::NotProper(why) => Err(Error::NotProper(why).into()),
        _ => Ok(()),
    }
}
