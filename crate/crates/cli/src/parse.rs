//! Text forms accepted on the command line.

use std::path::Path;

use entcert::audit::{Axis, ParamRange};
use entcert::qstate::{ghz_state, haar_random_pure, read_state_file, schmidt_state, w_state, PureState};

/// Slack allowed on hand-typed Schmidt coefficients before they are rescaled.
const TYPED_NORM_TOL: f64 = 1e-6;

fn number(text: &str) -> Result<f64, String> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| format!("'{text}' is not a number"))
}

fn count(text: &str) -> Result<usize, String> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| format!("'{text}' is not a qubit count"))
}

/// `ghz:N`, `w:N`, `haar:N:SEED`, `schmidt:λ0,λ1,λ2,λ3,λ4,θ`, or a JSON state file.
pub fn state(source: &str) -> Result<PureState, String> {
    let err = |e: entcert::Error| format!("state '{source}': {e}");
    let Some((kind, rest)) = source.split_once(':') else {
        return read_state_file(Path::new(source)).map_err(err);
    };
    match kind {
        "ghz" => ghz_state(count(rest)?).map_err(err),
        "w" => w_state(count(rest)?).map_err(err),
        "haar" => {
            let (n, seed) = rest
                .split_once(':')
                .ok_or_else(|| format!("expected haar:N:SEED, got '{source}'"))?;
            let seed = seed.trim().parse::<u64>().map_err(|_| format!("bad seed '{seed}'"))?;
            haar_random_pure(count(n)?, seed).map_err(err)
        }
        "schmidt" => {
            let v = rest.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
            let [l0, l1, l2, l3, l4, theta] = v[..] else {
                return Err(format!("schmidt needs six numbers λ0..λ4,θ, got {}", v.len()));
            };
            let mut lambda = [l0, l1, l2, l3, l4];
            let norm2: f64 = lambda.iter().map(|l| l * l).sum();
            if (norm2 - 1.0).abs() > TYPED_NORM_TOL {
                return Err(format!("schmidt coefficients have squared norm {norm2}, expected 1"));
            }
            let norm = norm2.sqrt();
            lambda.iter_mut().for_each(|l| *l /= norm);
            schmidt_state(lambda, theta).map_err(err)
        }
        _ => read_state_file(Path::new(source)).map_err(err),
    }
}

/// `name=v`, `name=lo:hi`.
pub fn param_range(text: &str) -> Result<(String, ParamRange), String> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected name=value or name=lo:hi, got '{text}'"))?;
    let range = match value.split_once(':') {
        Some((lo, hi)) => ParamRange::Range([number(lo)?, number(hi)?]),
        None => ParamRange::Fixed(number(value)?),
    };
    Ok((name.trim().to_string(), range))
}

/// `a=lo:hi:step,b=v1/v2/v3`. A single value is a one-point axis.
pub fn grid(text: &str) -> Result<Vec<Axis>, String> {
    text.split(',')
        .map(|part| {
            let (name, spec) = part
                .split_once('=')
                .ok_or_else(|| format!("grid axis '{part}' needs name=..."))?;
            let name = name.trim();
            let fields: Vec<&str> = spec.split(':').collect();
            let axis = match fields[..] {
                [lo, hi, step] => Axis::range(name, number(lo)?, number(hi)?, number(step)?),
                [_] => Axis::list(name, spec.split('/').map(number).collect::<Result<_, _>>()?),
                _ => return Err(format!("axis '{part}' must be lo:hi:step or v1/v2/...")),
            };
            axis.map_err(|e| e.to_string())
        })
        .collect()
}
