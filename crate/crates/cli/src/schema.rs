//! Validator for the JSON report layout, independent of the serializer.

use serde_json::Value;

/// Checks a JSON report against the fixed layout: key order, value types,
/// `p/q` coefficients and the kind/param pairing of solution terms.
pub fn validate_report(raw: &str) -> Result<(), String> {
    let keys = [
        "\"equation\"",
        "\"order\"",
        "\"coefficient\"",
        "\"solution_terms\"",
        "\"image\"",
        "\"verification\"",
    ];
    let positions: Vec<usize> = keys
        .iter()
        .map(|k| raw.find(k).ok_or(format!("missing key {k}")))
        .collect::<Result<_, _>>()?;
    if positions.windows(2).any(|w| w[0] > w[1]) {
        return Err("keys out of order".into());
    }
    let v: Value = serde_json::from_str(raw).map_err(|e| e.to_string())?;
    let obj = v.as_object().ok_or("report is not an object")?;
    if obj.len() != keys.len() {
        return Err(format!("unexpected keys: {:?}", obj.keys().collect::<Vec<_>>()));
    }
    obj["equation"].as_str().ok_or("equation must be a string")?;
    match obj["order"].as_u64() {
        Some(1 | 2) => {}
        _ => return Err("order must be 1 or 2".into()),
    }
    match obj["coefficient"].as_str() {
        Some("1" | "n") => {}
        _ => return Err("coefficient must be \"1\" or \"n\"".into()),
    }
    obj["image"].as_str().ok_or("image must be a string")?;
    let terms = obj["solution_terms"].as_array().ok_or("solution_terms must be a list")?;
    for term in terms {
        let t = term.as_object().ok_or("term must be an object")?;
        if t.len() != 3 {
            return Err("term must have kind, coeff, param".into());
        }
        let coeff = t["coeff"].as_str().ok_or("coeff must be a string")?;
        let (p, q) = coeff.split_once('/').ok_or("coeff must be p/q")?;
        p.parse::<i128>().map_err(|_| format!("bad numerator in {coeff}"))?;
        q.parse::<u128>().map_err(|_| format!("bad denominator in {coeff}"))?;
        let param = &t["param"];
        match t["kind"].as_str() {
            Some("const") if param.is_null() => {}
            Some("mono" | "recip" | "harmonic") if param.is_u64() => {}
            Some("conv") if param.is_string() => {}
            other => return Err(format!("bad kind/param: {other:?} {param}")),
        }
    }
    let ver = obj["verification"].as_object().ok_or("verification must be an object")?;
    if ver.len() != 3 {
        return Err("verification must have checked_to, max_numeric_error, passed".into());
    }
    ver["checked_to"].as_u64().ok_or("checked_to must be an integer")?;
    ver["max_numeric_error"].as_f64().ok_or("max_numeric_error must be a number")?;
    ver["passed"].as_bool().ok_or("passed must be a boolean")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_report() {
        let raw = r#"{"equation": "D f = 0 ; f(1) = 0", "order": 1, "coefficient": "1",
            "solution_terms": [], "image": "0",
            "verification": {"checked_to": 10, "max_numeric_error": 0.0, "passed": true}}"#;
        assert_eq!(validate_report(raw), Ok(()));
        let swapped = raw.replace(r#""order": 1, "coefficient": "1","#, r#""coefficient": "1", "order": 1,"#);
        assert!(validate_report(&swapped).is_err());
    }
}
