//! Structured-text records (one record per line, versioned) and columnar
//! track files. Floats are written with 17 significant digits so identical
//! runs produce byte-identical files and every value round-trips.

use crate::error::{PtError, Result};
use crate::perturb::{PerturbationSeries, SeriesCoeffs};
use crate::scalar::{rat, ExactScalar, Rational};
use crate::spectra::{Level, SpectrumResult};
use crate::transitions::{ExceptionalPoint, IrrepBoundary, PhaseBoundary, Track};
use num_complex::Complex64;
use std::collections::BTreeMap;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| PtError::Parse(format!("bad float `{s}`")))
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse().map_err(|_| PtError::Parse(format!("bad integer `{s}`")))
}

fn fields(line: &str, kind: &str) -> Result<BTreeMap<String, String>> {
    let mut parts = line.split_whitespace();
    let head = parts.next().unwrap_or_default();
    if head != kind {
        return Err(PtError::Parse(format!("expected `{kind}` record, got `{head}`")));
    }
    let version = parts.next().unwrap_or_default();
    if version != "v1" {
        return Err(PtError::Parse(format!("unsupported record version `{version}`")));
    }
    let mut map = BTreeMap::new();
    for p in parts {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| PtError::Parse(format!("bad field `{p}`")))?;
        map.insert(k.to_string(), v.to_string());
    }
    Ok(map)
}

fn get<'m>(map: &'m BTreeMap<String, String>, key: &str) -> Result<&'m str> {
    map.get(key)
        .map(|s| s.as_str())
        .ok_or_else(|| PtError::Parse(format!("missing field `{key}`")))
}

// ---------------------------------------------------------------------------
// spectrum records
// ---------------------------------------------------------------------------

/// `spectrum v1 model=… a=… alpha=… beta=… irrep=… row=… shell=… converged=…
///  levels=re:im:delta:conv:real;…` (delta `-` when absent).
pub fn spectrum_to_line(r: &SpectrumResult) -> String {
    let levels: Vec<String> = r
        .levels
        .iter()
        .map(|l| {
            format!(
                "{}:{}:{}:{}:{}",
                fmt_f64(l.value.re),
                fmt_f64(l.value.im),
                l.delta.map(fmt_f64).unwrap_or_else(|| "-".into()),
                u8::from(l.converged),
                u8::from(l.is_real),
            )
        })
        .collect();
    format!(
        "spectrum v1 model={} a={} alpha={} beta={} irrep={} row={} shell={} converged={} levels={}",
        r.model,
        fmt_f64(r.a),
        fmt_f64(r.alpha),
        fmt_f64(r.beta),
        r.irrep,
        r.row,
        r.shell,
        u8::from(r.all_converged),
        levels.join(";"),
    )
}

pub fn spectrum_from_line(line: &str) -> Result<SpectrumResult> {
    let map = fields(line, "spectrum")?;
    let mut levels = Vec::new();
    let lv = get(&map, "levels")?;
    if !lv.is_empty() {
        for item in lv.split(';') {
            let parts: Vec<&str> = item.split(':').collect();
            if parts.len() != 5 {
                return Err(PtError::Parse(format!("bad level `{item}`")));
            }
            levels.push(Level {
                value: Complex64::new(parse_f64(parts[0])?, parse_f64(parts[1])?),
                delta: if parts[2] == "-" { None } else { Some(parse_f64(parts[2])?) },
                converged: parts[3] == "1",
                is_real: parts[4] == "1",
            });
        }
    }
    Ok(SpectrumResult {
        model: get(&map, "model")?.to_string(),
        a: parse_f64(get(&map, "a")?)?,
        alpha: parse_f64(get(&map, "alpha")?)?,
        beta: parse_f64(get(&map, "beta")?)?,
        irrep: get(&map, "irrep")?.to_string(),
        row: parse_usize(get(&map, "row")?)?,
        shell: parse_usize(get(&map, "shell")?)? as u32,
        levels,
        all_converged: get(&map, "converged")? == "1",
    })
}

// ---------------------------------------------------------------------------
// series records
// ---------------------------------------------------------------------------

/// `series v1 model=… irrep=… row=… shell0=… member=… exact=1
///  coeffs=k:<exact>;…` — exact coefficients in the `a+b r2+…(+…i)` scalar
/// notation; float-fallback series store `k:re:im` triplets with exact=0.
pub fn series_to_line(s: &PerturbationSeries) -> String {
    let coeffs = match &s.coeffs {
        SeriesCoeffs::Exact(v) => v
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{k}:{c}"))
            .collect::<Vec<_>>()
            .join(";"),
        SeriesCoeffs::Float(v) => v
            .iter()
            .enumerate()
            .map(|(k, c)| format!("{k}:{}:{}", fmt_f64(c.re), fmt_f64(c.im)))
            .collect::<Vec<_>>()
            .join(";"),
    };
    format!(
        "series v1 model={} irrep={} row={} shell0={} member={} exact={} coeffs={}",
        s.model,
        s.irrep,
        s.row,
        s.shell0,
        s.member,
        u8::from(s.is_exact()),
        coeffs,
    )
}

pub fn series_from_line(line: &str) -> Result<PerturbationSeries> {
    let map = fields(line, "series")?;
    let exact = get(&map, "exact")? == "1";
    let body = get(&map, "coeffs")?;
    let coeffs = if exact {
        let mut v: Vec<ExactScalar> = Vec::new();
        for item in body.split(';') {
            let (k, val) = item
                .split_once(':')
                .ok_or_else(|| PtError::Parse(format!("bad coeff `{item}`")))?;
            let k = parse_usize(k)?;
            if k != v.len() {
                return Err(PtError::Parse("coefficients out of order".into()));
            }
            v.push(val.parse().map_err(PtError::Parse)?);
        }
        SeriesCoeffs::Exact(v)
    } else {
        let mut v: Vec<Complex64> = Vec::new();
        for item in body.split(';') {
            let parts: Vec<&str> = item.split(':').collect();
            if parts.len() != 3 {
                return Err(PtError::Parse(format!("bad float coeff `{item}`")));
            }
            if parse_usize(parts[0])? != v.len() {
                return Err(PtError::Parse("coefficients out of order".into()));
            }
            v.push(Complex64::new(parse_f64(parts[1])?, parse_f64(parts[2])?));
        }
        SeriesCoeffs::Float(v)
    };
    let eps0: Rational = match &coeffs {
        SeriesCoeffs::Exact(v) => v
            .first()
            .and_then(|c| c.re.as_rational().cloned())
            .unwrap_or_else(|| rat(0)),
        SeriesCoeffs::Float(v) => {
            Rational::from_float(v.first().map(|c| c.re).unwrap_or(0.0)).unwrap_or_else(|| rat(0))
        }
    };
    Ok(PerturbationSeries {
        model: get(&map, "model")?.to_string(),
        irrep: get(&map, "irrep")?.to_string(),
        row: parse_usize(get(&map, "row")?)?,
        shell0: parse_usize(get(&map, "shell0")?)? as u32,
        eps0,
        member: parse_usize(get(&map, "member")?)?,
        coeffs,
    })
}

/// Human-readable polynomial, e.g. `2 + 1/18 a^2 - 11/864 a^4`.
pub fn series_pretty(s: &PerturbationSeries) -> String {
    let mut out = String::new();
    for k in 0..=s.order() {
        let (text, is_zero, negative) = match &s.coeffs {
            SeriesCoeffs::Exact(v) => {
                let c = &v[k];
                let neg = c.is_real() && c.re.to_f64() < 0.0;
                let body = if neg { format!("{}", -c.clone()) } else { format!("{c}") };
                (body, v[k].is_zero(), neg)
            }
            SeriesCoeffs::Float(v) => {
                (format!("({}{:+}i)", v[k].re, v[k].im), v[k].norm() == 0.0, false)
            }
        };
        if is_zero {
            continue;
        }
        if out.is_empty() {
            if negative {
                out.push_str("-");
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&text);
        match k {
            0 => {}
            1 => out.push_str(" a"),
            _ => out.push_str(&format!(" a^{k}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

// ---------------------------------------------------------------------------
// transition records
// ---------------------------------------------------------------------------

/// `exceptional v1 model=… irrep=… row=… pair=i,j a_c=… lo=… hi=… re=… im=…
///  real_below=0|1`
pub fn exceptional_to_line(ep: &ExceptionalPoint) -> String {
    format!(
        "exceptional v1 model={} irrep={} row={} pair={},{} a_c={} lo={} hi={} re={} im={} real_below={}",
        ep.model,
        ep.irrep,
        ep.row,
        ep.level_pair.0,
        ep.level_pair.1,
        fmt_f64(ep.a_c),
        fmt_f64(ep.bracket.0),
        fmt_f64(ep.bracket.1),
        fmt_f64(ep.value.re),
        fmt_f64(ep.value.im),
        u8::from(ep.real_below),
    )
}

pub fn exceptional_from_line(line: &str) -> Result<ExceptionalPoint> {
    let map = fields(line, "exceptional")?;
    let pair = get(&map, "pair")?;
    let (i, j) = pair
        .split_once(',')
        .ok_or_else(|| PtError::Parse("bad pair".into()))?;
    Ok(ExceptionalPoint {
        model: get(&map, "model")?.to_string(),
        irrep: get(&map, "irrep")?.to_string(),
        row: parse_usize(get(&map, "row")?)?,
        level_pair: (parse_usize(i)?, parse_usize(j)?),
        a_c: parse_f64(get(&map, "a_c")?)?,
        bracket: (parse_f64(get(&map, "lo")?)?, parse_f64(get(&map, "hi")?)?),
        value: Complex64::new(parse_f64(get(&map, "re")?)?, parse_f64(get(&map, "im")?)?),
        real_below: get(&map, "real_below")? == "1",
    })
}

/// `boundary v1 model=… a_transition=… trivial=… lo=… hi=…
///  entries=irrep:row:a_c|-:triv:exp|-:level|-;…`
pub fn boundary_to_line(pb: &PhaseBoundary) -> String {
    let entries: Vec<String> = pb
        .per_irrep
        .iter()
        .map(|e| {
            format!(
                "{}:{}:{}:{}:{}:{}",
                e.irrep,
                e.row,
                e.a_c.map(fmt_f64).unwrap_or_else(|| "-".into()),
                u8::from(e.trivial),
                e.exponent.map(fmt_f64).unwrap_or_else(|| "-".into()),
                e.level.map(|l| l.to_string()).unwrap_or_else(|| "-".into()),
            )
        })
        .collect();
    format!(
        "boundary v1 model={} a_transition={} trivial={} lo={} hi={} entries={}",
        pb.model,
        fmt_f64(pb.a_transition),
        u8::from(pb.trivial),
        fmt_f64(pb.window.0),
        fmt_f64(pb.window.1),
        entries.join(";"),
    )
}

pub fn boundary_from_line(line: &str) -> Result<PhaseBoundary> {
    let map = fields(line, "boundary")?;
    let mut per_irrep = Vec::new();
    for item in get(&map, "entries")?.split(';') {
        let parts: Vec<&str> = item.split(':').collect();
        if parts.len() != 6 {
            return Err(PtError::Parse(format!("bad boundary entry `{item}`")));
        }
        per_irrep.push(IrrepBoundary {
            irrep: parts[0].to_string(),
            row: parse_usize(parts[1])?,
            a_c: if parts[2] == "-" { None } else { Some(parse_f64(parts[2])?) },
            trivial: parts[3] == "1",
            exponent: if parts[4] == "-" { None } else { Some(parse_f64(parts[4])?) },
            level: if parts[5] == "-" { None } else { Some(parse_usize(parts[5])?) },
        });
    }
    Ok(PhaseBoundary {
        model: get(&map, "model")?.to_string(),
        a_transition: parse_f64(get(&map, "a_transition")?)?,
        trivial: get(&map, "trivial")? == "1",
        per_irrep,
        window: (parse_f64(get(&map, "lo")?)?, parse_f64(get(&map, "hi")?)?),
    })
}

// ---------------------------------------------------------------------------
// track files
// ---------------------------------------------------------------------------

/// Columnar track file: header lines, then one row per grid point with
/// `a re[0] im[0] re[1] im[1] …`.
pub fn tracks_to_columns(model: &str, irrep: &str, row: usize, tracks: &[Track]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "# ptspec tracks v1 model={model} irrep={irrep} row={row} levels={}\n",
        tracks.len()
    ));
    out.push_str("# a");
    for t in tracks {
        out.push_str(&format!(" re[{0}] im[{0}]", t.index));
    }
    out.push('\n');
    if tracks.is_empty() {
        return out;
    }
    let npts = tracks[0].points.len();
    for p in 0..npts {
        out.push_str(&fmt_f64(tracks[0].points[p].a));
        for t in tracks {
            out.push_str(&format!(
                " {} {}",
                fmt_f64(t.points[p].value.re),
                fmt_f64(t.points[p].value.im)
            ));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Model, ModelId};

    #[test]
    fn spectrum_roundtrip() {
        let model = Model::new(ModelId::Solvable1);
        let r = crate::spectra::block_spectrum(&model, 0.4, "B2", 0, 8).unwrap();
        let line = spectrum_to_line(&r);
        let back = spectrum_from_line(&line).unwrap();
        assert_eq!(spectrum_to_line(&back), line);
        assert_eq!(back.levels.len(), r.levels.len());
        for (a, b) in r.levels.iter().zip(back.levels.iter()) {
            assert_eq!(a.value, b.value);
            assert_eq!(a.converged, b.converged);
        }
    }

    #[test]
    fn series_roundtrip_exact() {
        let model = Model::new(ModelId::HenonHeiles);
        let s = crate::perturb::rs_series(&model, "A1", 0, 0, 4, None).unwrap();
        let line = series_to_line(&s[0]);
        let back = series_from_line(&line).unwrap();
        assert_eq!(series_to_line(&back), line);
        assert_eq!(back.exact().unwrap(), s[0].exact().unwrap());
        let pretty = series_pretty(&s[0]);
        assert!(pretty.starts_with("2 + 1/18 a^2"), "{pretty}");
    }

    #[test]
    fn transition_roundtrips() {
        let ep = ExceptionalPoint {
            model: "solvable2".into(),
            irrep: "B".into(),
            row: 0,
            level_pair: (0, 1),
            a_c: 0.9998,
            bracket: (0.9995, 1.0002),
            value: Complex64::new(7.34, 0.0),
            real_below: true,
        };
        let line = exceptional_to_line(&ep);
        let back = exceptional_from_line(&line).unwrap();
        assert_eq!(exceptional_to_line(&back), line);

        let pb = PhaseBoundary {
            model: "pullen_edmonds".into(),
            a_transition: 0.0,
            trivial: true,
            per_irrep: vec![IrrepBoundary {
                irrep: "B1".into(),
                row: 0,
                a_c: Some(0.01),
                trivial: true,
                exponent: Some(1.002),
                level: Some(0),
            }],
            window: (0.01, 1.0),
        };
        let line = boundary_to_line(&pb);
        let back = boundary_from_line(&line).unwrap();
        assert_eq!(boundary_to_line(&back), line);
    }

    #[test]
    fn float_format_roundtrips_exactly() {
        for x in [0.1, -3.25e-17, 1.0 / 3.0, 2.0153294551533834, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(x, back, "{s}");
        }
    }
}
