//! Strict parsing of angles, ranges and mesh specs.

use std::f64::consts::PI;

use cosserat_core::fem::MeshSpec;

/// `90deg`, `1.5708rad`; the unit is mandatory.
pub fn angle(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (num, factor) = if let Some(v) = s.strip_suffix("deg") {
        (v, PI / 180.0)
    } else if let Some(v) = s.strip_suffix("rad") {
        (v, 1.0)
    } else {
        return Err(format!("angle '{s}' needs a unit suffix, deg or rad"));
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("invalid angle '{s}'"))?;
    if !v.is_finite() {
        return Err(format!("invalid angle '{s}'"));
    }
    Ok(v * factor)
}

/// Comma-separated angles; bare numbers are degrees.
pub fn angle_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            if p.ends_with("deg") || p.ends_with("rad") {
                angle(p)
            } else {
                number(p).map(|d| d.to_radians())
            }
        })
        .collect()
}

pub fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("invalid number '{s}'"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("invalid number '{s}'"))
    }
}

/// `lo:hi` with both ends parsed by `f`.
pub fn range(s: &str, f: fn(&str) -> Result<f64, String>) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("range '{s}' must be lo:hi"));
    }
    let (lo, hi) = (f(parts[0])?, f(parts[1])?);
    if !(lo <= hi) {
        return Err(format!("range '{s}' has lo > hi"));
    }
    Ok((lo, hi))
}

/// `lo:hi:count` evenly spaced, endpoints included.
pub fn grid(s: &str, f: fn(&str) -> Result<f64, String>) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid '{s}' must be lo:hi:count"));
    }
    let (lo, hi) = range(&format!("{}:{}", parts[0], parts[1]), f)?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("invalid count in '{s}'"))?;
    if n == 0 || (n == 1 && lo != hi) {
        return Err(format!("grid '{s}' needs at least two points"));
    }
    Ok(linspace(lo, hi, n))
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

/// Grid given either as `lo:hi:count` or as a comma-separated list.
pub fn values(s: &str) -> Result<Vec<f64>, String> {
    if s.contains(':') {
        grid(s, number)
    } else {
        s.split(',').map(number).collect()
    }
}

/// Mesh selection on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum MeshArg {
    /// Uniform level `n`: `2^n` cells on the shortest axis.
    Level(u32),
    Spec(MeshSpec),
}

impl MeshArg {
    pub fn spec(&self) -> MeshSpec {
        match self {
            MeshArg::Level(n) => MeshSpec::level(*n),
            MeshArg::Spec(s) => s.clone(),
        }
    }

    pub fn level(&self) -> Option<u32> {
        match self {
            MeshArg::Level(n) => Some(*n),
            MeshArg::Spec(_) => None,
        }
    }
}

/// `uniform:N`, `level:n`, `refined:L,q` or `cells:AxB[xC]`.
pub fn mesh(s: &str) -> Result<MeshArg, String> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| format!("mesh '{s}' must be kind:args"))?;
    let count = |v: &str| -> Result<usize, String> {
        v.trim()
            .parse::<usize>()
            .map_err(|_| format!("invalid count '{v}' in mesh '{s}'"))
    };
    match kind {
        "uniform" => {
            let n = count(rest)?;
            if n == 0 {
                return Err("uniform:N needs N >= 1".into());
            }
            Ok(MeshArg::Spec(MeshSpec::Uniform { n }))
        }
        "level" => {
            let n = count(rest)?;
            if n == 0 || n > 12 {
                return Err("level:n needs 1 <= n <= 12".into());
            }
            Ok(MeshArg::Level(n as u32))
        }
        "refined" => {
            let (l, q) = rest.split_once(',').ok_or("refined:L,q")?;
            let layers = count(l)?;
            let ratio = number(q)?;
            if layers == 0 || !(ratio > 0.0 && ratio < 1.0) {
                return Err("refined:L,q needs L >= 1 and 0 < q < 1".into());
            }
            Ok(MeshArg::Spec(MeshSpec::CornerRefined { layers, ratio }))
        }
        "cells" => {
            let c = rest
                .split('x')
                .map(count)
                .collect::<Result<Vec<usize>, String>>()?;
            if c.contains(&0) {
                return Err("cells need positive counts".into());
            }
            Ok(MeshArg::Spec(MeshSpec::Cells(c)))
        }
        _ => Err(format!("unknown mesh kind '{kind}'")),
    }
}
