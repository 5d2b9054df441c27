//! Instances, scenarios, selections and JSON instance I/O.
//!
//! Item indices are 0-based throughout the library.

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result, Violation};
use crate::rational::{debug_check, parse_rational, to_text, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BudgetModel {
    Continuous,
    Discrete,
}

impl BudgetModel {
    pub fn as_str(self) -> &'static str {
        match self {
            BudgetModel::Continuous => "continuous",
            BudgetModel::Discrete => "discrete",
        }
    }
}

impl std::str::FromStr for BudgetModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "continuous" => Ok(BudgetModel::Continuous),
            "discrete" => Ok(BudgetModel::Discrete),
            _ => Err(Error::Parse {
                field: "budget_model".into(),
                reason: format!("expected \"continuous\" or \"discrete\", got {s:?}"),
            }),
        }
    }
}

/// The problem variants handled by the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Problem {
    Irec,
    I2st,
    Arec,
    A2st,
    Rrec,
    R2st,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Irec => "irec",
            Problem::I2st => "i2st",
            Problem::Arec => "arec",
            Problem::A2st => "a2st",
            Problem::Rrec => "rrec",
            Problem::R2st => "r2st",
        }
    }

    /// Whether the first stage must hold exactly `p` items (otherwise at most `p`).
    pub fn recoverable(self) -> bool {
        matches!(self, Problem::Irec | Problem::Arec | Problem::Rrec)
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "irec" => Problem::Irec,
            "i2st" => Problem::I2st,
            "arec" => Problem::Arec,
            "a2st" => Problem::A2st,
            "rrec" => Problem::Rrec,
            "r2st" => Problem::R2st,
            _ => {
                return Err(Error::Parse {
                    field: "problem".into(),
                    reason: format!("unknown problem {s:?}"),
                })
            }
        })
    }
}

/// A selection instance with budgeted uncertainty on the second-stage costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub gamma: Rational,
    pub budget_model: BudgetModel,
    pub first_stage_cost: Vec<Rational>,
    pub nominal_cost: Vec<Rational>,
    pub deviation: Vec<Rational>,
}

impl Instance {
    /// Builds and validates an instance; `n` is taken from `nominal_cost`.
    pub fn new(
        p: usize,
        k: usize,
        gamma: Rational,
        budget_model: BudgetModel,
        first_stage_cost: Vec<Rational>,
        nominal_cost: Vec<Rational>,
        deviation: Vec<Rational>,
    ) -> Result<Self> {
        let inst = Instance {
            n: nominal_cost.len(),
            p,
            k,
            gamma,
            budget_model,
            first_stage_cost,
            nominal_cost,
            deviation,
        };
        let v = validate_instance(&inst);
        if v.is_empty() {
            Ok(inst)
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Upper cost `c̄_i = c̲_i + d_i`.
    pub fn upper(&self, i: usize) -> Rational {
        &self.nominal_cost[i] + &self.deviation[i]
    }

    pub fn upper_costs(&self) -> Vec<Rational> {
        (0..self.n).map(|i| self.upper(i)).collect()
    }

    pub fn is_discrete(&self) -> bool {
        self.budget_model == BudgetModel::Discrete
    }

    /// Γ as an item count (discrete model only), clamped to `n`.
    pub fn gamma_count(&self) -> usize {
        let g = self.gamma.to_integer();
        if g >= num_bigint::BigInt::from(self.n) {
            self.n
        } else {
            g.try_into().unwrap_or(0)
        }
    }

    /// Same instance with different `p` and `k`.
    pub fn with_pk(&self, p: usize, k: usize) -> Result<Self> {
        let mut c = self.clone();
        c.p = p;
        c.k = k;
        let v = validate_instance(&c);
        if v.is_empty() {
            Ok(c)
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Restriction to the given items (in the given order).
    pub fn restrict(&self, items: &[usize], p: usize, k: usize) -> Result<Self> {
        let pick = |v: &[Rational]| items.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
        Instance::new(
            p,
            k,
            self.gamma.clone(),
            self.budget_model,
            pick(&self.first_stage_cost),
            pick(&self.nominal_cost),
            pick(&self.deviation),
        )
    }
}

/// A realized scenario, stored as deviations from the nominal costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub deltas: Vec<Rational>,
}

impl Scenario {
    pub fn nominal(n: usize) -> Self {
        Scenario {
            deltas: vec![Rational::zero(); n],
        }
    }

    /// The scenario raising every item listed in `items` to its upper cost.
    pub fn raise(inst: &Instance, items: &[usize]) -> Self {
        let mut s = Self::nominal(inst.n);
        for &i in items {
            s.deltas[i] = inst.deviation[i].clone();
        }
        s
    }

    pub fn costs(&self, inst: &Instance) -> Vec<Rational> {
        inst.nominal_cost
            .iter()
            .zip(&self.deltas)
            .map(|(c, d)| {
                let v = c + d;
                debug_check(&v);
                v
            })
            .collect()
    }

    /// Checks membership in the uncertainty set of `inst`.
    pub fn check(&self, inst: &Instance) -> Result<()> {
        let bad = |m: String| Err(Error::Precondition(m));
        if self.deltas.len() != inst.n {
            return bad(format!("scenario has {} entries, expected {}", self.deltas.len(), inst.n));
        }
        let mut total = Rational::zero();
        let mut raised = 0usize;
        for (i, (dl, d)) in self.deltas.iter().zip(&inst.deviation).enumerate() {
            if dl.is_negative() || dl > d {
                return bad(format!("delta of item {} outside [0, d_i]", i + 1));
            }
            match inst.budget_model {
                BudgetModel::Continuous => total += dl,
                BudgetModel::Discrete => {
                    if !dl.is_zero() && dl != d {
                        return bad(format!("delta of item {} must be 0 or d_i", i + 1));
                    }
                    if !dl.is_zero() {
                        raised += 1;
                    }
                }
            }
        }
        let over = match inst.budget_model {
            BudgetModel::Continuous => total > inst.gamma,
            BudgetModel::Discrete => Rational::from_integer(raised.into()) > inst.gamma,
        };
        if over {
            return bad("scenario exceeds the budget".into());
        }
        Ok(())
    }
}

/// An item subset with its cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionSolution {
    pub items: Vec<usize>,
    pub indicator: Vec<bool>,
    pub value: Rational,
}

impl SelectionSolution {
    pub fn new(n: usize, mut items: Vec<usize>, value: Rational) -> Self {
        items.sort_unstable();
        items.dedup();
        let mut indicator = vec![false; n];
        for &i in &items {
            indicator[i] = true;
        }
        debug_check(&value);
        SelectionSolution {
            items,
            indicator,
            value,
        }
    }

    /// A first-stage set; its value is the sum of `costs` over the items.
    pub fn from_items(items: &[usize], costs: &[Rational]) -> Self {
        let value = items.iter().map(|&i| &costs[i]).sum();
        Self::new(costs.len(), items.to_vec(), value)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indicator[i]
    }
}

/// Returns every violated instance invariant.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.p == 0 {
        out.push(Violation::new("p", "p must be at least 1"));
    }
    if inst.p > inst.n {
        out.push(Violation::new("p", "p exceeds n"));
    }
    if inst.k > inst.p {
        out.push(Violation::new("k", "k exceeds p"));
    }
    if inst.gamma.is_negative() {
        out.push(Violation::new("gamma", "gamma must be nonnegative"));
    }
    if inst.budget_model == BudgetModel::Discrete && !inst.gamma.is_integer() {
        out.push(Violation::new("gamma", "discrete budget must be integer"));
    }
    let vectors: [(&'static str, &Vec<Rational>); 3] = [
        ("first_stage_cost", &inst.first_stage_cost),
        ("nominal_cost", &inst.nominal_cost),
        ("deviation", &inst.deviation),
    ];
    for (field, v) in vectors {
        if v.len() != inst.n {
            out.push(Violation::new(
                field,
                format!("{field} has length {}, expected n = {}", v.len(), inst.n),
            ));
        }
        if v.iter().any(|x| x.is_negative()) {
            let what = match field {
                "deviation" => "deviation must be nonnegative".to_string(),
                _ => format!("{field} must be nonnegative"),
            };
            out.push(Violation::new(field, what));
        }
    }
    out
}

fn field_err(field: &str, reason: impl Into<String>) -> Error {
    Error::Parse {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn number(field: &str, v: &Value) -> Result<Rational> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(field_err(field, "expected a number or decimal string")),
    };
    parse_rational(&text).ok_or_else(|| field_err(field, format!("cannot parse {text:?} as a number")))
}

fn count(obj: &Map<String, Value>, field: &str) -> Result<usize> {
    let v = obj.get(field).ok_or_else(|| field_err(field, "missing"))?;
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| field_err(field, "expected a nonnegative integer"))
}

fn vector(obj: &Map<String, Value>, field: &str) -> Result<Option<Vec<Rational>>> {
    match obj.get(field) {
        None => Ok(None),
        Some(Value::Array(a)) => a.iter().map(|x| number(field, x)).collect::<Result<_>>().map(Some),
        Some(_) => Err(field_err(field, "expected an array")),
    }
}

/// Parses and validates a JSON instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: Value = serde_json::from_str(text)?;
    let obj = doc
        .as_object()
        .ok_or_else(|| field_err("<root>", "expected a JSON object"))?;
    const KNOWN: [&str; 8] = [
        "n",
        "p",
        "k",
        "gamma",
        "budget_model",
        "first_stage_cost",
        "nominal_cost",
        "deviation",
    ];
    if let Some(extra) = obj.keys().find(|k| !KNOWN.contains(&k.as_str())) {
        return Err(field_err(extra, "unknown field"));
    }
    let n = count(obj, "n")?;
    let p = count(obj, "p")?;
    let k = count(obj, "k")?;
    let gamma = number("gamma", obj.get("gamma").ok_or_else(|| field_err("gamma", "missing"))?)?;
    let budget_model: BudgetModel = obj
        .get("budget_model")
        .and_then(Value::as_str)
        .ok_or_else(|| field_err("budget_model", "missing or not a string"))?
        .parse()?;
    let nominal_cost = vector(obj, "nominal_cost")?.ok_or_else(|| field_err("nominal_cost", "missing"))?;
    let deviation = vector(obj, "deviation")?.ok_or_else(|| field_err("deviation", "missing"))?;
    let first_stage_cost = vector(obj, "first_stage_cost")?.unwrap_or_else(|| vec![Rational::zero(); n]);
    let inst = Instance {
        n,
        p,
        k,
        gamma,
        budget_model,
        first_stage_cost,
        nominal_cost,
        deviation,
    };
    let v = validate_instance(&inst);
    if v.is_empty() {
        Ok(inst)
    } else {
        Err(Error::Invalid(v))
    }
}

fn num_value(v: &Rational) -> Value {
    if v.is_integer() {
        if let Ok(i) = i64::try_from(v.to_integer()) {
            return json!(i);
        }
    }
    Value::String(to_text(v))
}

pub fn instance_to_value(inst: &Instance) -> Value {
    let arr = |v: &[Rational]| Value::Array(v.iter().map(num_value).collect());
    json!({
        "n": inst.n,
        "p": inst.p,
        "k": inst.k,
        "gamma": num_value(&inst.gamma),
        "budget_model": inst.budget_model.as_str(),
        "first_stage_cost": arr(&inst.first_stage_cost),
        "nominal_cost": arr(&inst.nominal_cost),
        "deviation": arr(&inst.deviation),
    })
}

/// Serializes with exact values; non-terminating fractions are written as `"p/q"`.
pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string(&instance_to_value(inst)).expect("instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    const DOC: &str = r#"{"n":2,"p":1,"k":1,"gamma":"1","budget_model":"continuous","first_stage_cost":[0,0],"nominal_cost":[1,2],"deviation":[1,0]}"#;

    #[test]
    fn parses_example() {
        let inst = parse_instance(DOC).unwrap();
        assert_eq!(inst.upper_costs(), vec![rat(2), rat(2)]);
        assert_eq!(inst.gamma, rat(1));
    }

    #[test]
    fn reports_p_exceeds_n() {
        let err = parse_instance(&DOC.replace("\"p\":1", "\"p\":3")).unwrap_err();
        assert!(err.to_string().contains("p exceeds n"), "{err}");
    }

    #[test]
    fn discrete_budget_must_be_integer() {
        let doc = DOC
            .replace("\"gamma\":\"1\"", "\"gamma\":\"0.5\"")
            .replace("continuous", "discrete");
        let err = parse_instance(&doc).unwrap_err();
        assert!(err.to_string().contains("discrete budget must be integer"));
    }

    #[test]
    fn validate_lists_violations() {
        let mut inst = parse_instance(DOC).unwrap();
        assert!(validate_instance(&inst).is_empty());
        inst.k = inst.p + 1;
        let v: Vec<String> = validate_instance(&inst).iter().map(|v| v.to_string()).collect();
        assert_eq!(v, vec!["k exceeds p"]);
        inst.k = 1;
        inst.deviation[1] = rat(-1);
        let v: Vec<String> = validate_instance(&inst).iter().map(|v| v.to_string()).collect();
        assert_eq!(v, vec!["deviation must be nonnegative"]);
    }

    #[test]
    fn missing_first_stage_defaults_to_zero() {
        let doc = r#"{"n":2,"p":1,"k":0,"gamma":0,"budget_model":"discrete","nominal_cost":["0.5",2],"deviation":[1,0]}"#;
        let inst = parse_instance(doc).unwrap();
        assert_eq!(inst.first_stage_cost, vec![rat(0), rat(0)]);
        assert_eq!(inst.nominal_cost[0], ratio(1, 2));
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert!(parse_instance(&DOC.replace("\"k\":1", "\"k\":1,\"q\":2")).is_err());
        assert!(parse_instance(&DOC.replace("[1,0]", "[1,\"x\"]")).is_err());
        assert!(parse_instance(&DOC.replace("[1,0]", "[1]")).is_err());
    }

    #[test]
    fn round_trip() {
        let inst = Instance::new(
            2,
            1,
            ratio(7, 3),
            BudgetModel::Continuous,
            vec![ratio(1, 3), rat(0), ratio(5, 2)],
            vec![rat(1), ratio(1, 8), rat(4)],
            vec![rat(0), rat(2), ratio(2, 7)],
        )
        .unwrap();
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(serialize_instance(&back), text);
    }

    #[test]
    fn scenario_membership() {
        let inst = parse_instance(DOC).unwrap();
        let s = Scenario { deltas: vec![rat(1), rat(0)] };
        assert!(s.check(&inst).is_ok());
        let s = Scenario { deltas: vec![rat(2), rat(0)] };
        assert!(s.check(&inst).is_err());
    }
}
