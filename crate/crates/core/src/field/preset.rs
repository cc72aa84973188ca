use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::{HeckeCharacter, IdealRep, ImagQuadField, OkElem};
use crate::error::{Error, Result};

/// On-disk preset format (see `docs/schemas.md`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresetFile {
    #[serde(default)]
    pub id: Option<String>,
    #[serde(rename = "d_K")]
    pub d_k: u32,
    pub conductor_generator: [i64; 2],
    pub twist_table: Vec<([i64; 2], usize)>,
    pub curve: CurveFile,
    /// Auxiliary ideal for theta quotients, as a generator `[a, b]`.
    #[serde(default)]
    pub alpha: Option<[i64; 2]>,
    /// Good rational prime used by the p-adic suites.
    #[serde(default)]
    pub prime: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveFile {
    pub a4: String,
    pub a6: String,
    pub real_period_hint: String,
}

/// Short Weierstrass model `y² = x³ + a4·x + a6`.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub a4: Rational,
    pub a6: Rational,
    pub real_period_hint: String,
}

impl CurveData {
    pub fn discriminant(&self) -> Rational {
        let a4c = (self.a4.clone() * &self.a4) * &self.a4;
        let a6s = self.a6.clone() * &self.a6;
        Rational::from(-16) * ((4 * a4c) + (27 * a6s))
    }

    pub fn j_invariant(&self) -> Result<Rational> {
        let a4c = (self.a4.clone() * &self.a4) * &self.a4;
        let a6s = self.a6.clone() * &self.a6;
        let den = (4 * a4c.clone()) + (27 * a6s);
        if den == 0 {
            return Err(Error::SingularCurve);
        }
        Ok((1728 * (4 * a4c)) / den)
    }

    /// `a_p = p + 1 − #E(F_p)` by naive point counting; `p` must not divide
    /// the denominators or the discriminant.
    pub fn trace_of_frobenius(&self, p: u64) -> i64 {
        let pi = Integer::from(p);
        let red = |q: &Rational| -> u64 {
            let den_inv = q.denom().clone().invert(&pi).expect("p divides a denominator");
            let v = (q.numer() * den_inv).modulo(&pi);
            v.to_u64().unwrap()
        };
        let (a4, a6) = (red(&self.a4), red(&self.a6));
        let mut squares = vec![0i64; p as usize];
        for y in 0..p {
            squares[((y * y) % p) as usize] += 1;
        }
        let mut count = 1i64;
        for x in 0..p {
            let rhs = ((x * x % p) * x % p + a4 * x % p + a6) % p;
            count += squares[rhs as usize];
        }
        p as i64 + 1 - count
    }
}

/// j-invariant of the curves with CM by the maximal order of discriminant `-d`.
pub fn cm_j_invariant(d_k: u32) -> Integer {
    let s = match d_k {
        3 => "0",
        4 => "1728",
        7 => "-3375",
        8 => "8000",
        11 => "-32768",
        19 => "-884736",
        43 => "-884736000",
        67 => "-147197952000",
        163 => "-262537412640768000",
        _ => unreachable!("class number one list"),
    };
    s.parse().unwrap()
}

/// A validated preset: field, character, curve and auxiliary data.
#[derive(Clone, Debug)]
pub struct Preset {
    pub id: String,
    pub field: ImagQuadField,
    pub psi: HeckeCharacter,
    pub curve: CurveData,
    pub alpha: IdealRep,
    pub prime: u64,
}

const QI: &str = include_str!("../../presets/qi.json");
const Q7: &str = include_str!("../../presets/q7.json");
const Q3: &str = include_str!("../../presets/q3.json");

impl Preset {
    pub fn builtin_names() -> &'static [&'static str] {
        &["qi", "q7", "q3"]
    }

    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "qi" => QI,
            "q7" => Q7,
            "q3" => Q3,
            other => return Err(Error::PresetParse(format!("unknown built-in preset {other}"))),
        };
        Self::from_json(text, Some(name))
    }

    pub fn all_builtin() -> Vec<Self> {
        Self::builtin_names().iter().map(|n| Self::builtin(n).expect("built-in preset")).collect()
    }

    /// Load a built-in preset by name or a preset file by path.
    pub fn load(spec: &str) -> Result<Self> {
        if Self::builtin_names().contains(&spec) {
            return Self::builtin(spec);
        }
        let text = std::fs::read_to_string(spec).map_err(|e| Error::PresetParse(format!("{spec}: {e}")))?;
        let stem = std::path::Path::new(spec).file_stem().and_then(|s| s.to_str()).map(|s| s.to_string());
        Self::from_json(&text, stem.as_deref())
    }

    pub fn from_json(text: &str, fallback_id: Option<&str>) -> Result<Self> {
        let file: PresetFile = serde_json::from_str(text).map_err(|e| Error::PresetParse(e.to_string()))?;
        Self::from_file(file, fallback_id)
    }

    pub fn from_file(file: PresetFile, fallback_id: Option<&str>) -> Result<Self> {
        let field = ImagQuadField::new(file.d_k).map_err(|e| Error::PresetParse(e.to_string()))?;
        let el = |v: [i64; 2]| field.elem(v[0] as i128, v[1] as i128);
        let f = el(file.conductor_generator);
        if f.is_zero() {
            return Err(Error::PresetParse("zero conductor".into()));
        }
        let twist: Vec<(OkElem, usize)> = file.twist_table.iter().map(|(r, j)| (el(*r), *j)).collect();
        let psi = HeckeCharacter::new(f, &twist)?;
        let parse_q = |s: &str| -> Result<Rational> {
            s.trim().parse::<Rational>().map_err(|e| Error::PresetParse(format!("bad rational {s}: {e}")))
        };
        let curve = CurveData {
            a4: parse_q(&file.curve.a4)?,
            a6: parse_q(&file.curve.a6)?,
            real_period_hint: file.curve.real_period_hint.clone(),
        };
        let j = curve.j_invariant().map_err(|_| Error::PresetParse("singular curve".into()))?;
        if j != cm_j_invariant(file.d_k) {
            return Err(Error::PresetParse(format!(
                "curve j-invariant {j} does not match CM by discriminant -{}",
                file.d_k
            )));
        }
        let alpha = match file.alpha {
            Some(a) => IdealRep::new(el(a)),
            None => IdealRep::unit(field),
        };
        let prime = file.prime.unwrap_or(5);
        let id = file.id.clone().or_else(|| fallback_id.map(|s| s.to_string())).unwrap_or_else(|| "custom".into());
        Ok(Preset { id, field, psi, curve, alpha, prime })
    }

    /// The conductor generator `f` pinned by the preset.
    pub fn f(&self) -> OkElem {
        *self.psi.conductor()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_load_and_validate() {
        for p in Preset::all_builtin() {
            assert_eq!(p.curve.j_invariant().unwrap(), cm_j_invariant(p.field.d_k()));
            assert!(p.alpha.gen.coprime_to(&p.f()));
        }
    }

    #[test]
    fn frobenius_traces_match_character() {
        // a_p = Tr ψ(𝔭) at split good primes, by naive point counting
        for pre in Preset::all_builtin() {
            let f = pre.f();
            for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43] {
                if let crate::field::SplitType::Split(pp, _) = pre.field.split_type(p) {
                    if f.norm() % p as i128 == 0 {
                        continue;
                    }
                    let psi = pre.psi.psi_eval(&pp).unwrap();
                    assert_eq!(pre.curve.trace_of_frobenius(p) as i128, psi.trace(), "{} at {p}", pre.id);
                }
            }
        }
    }

    #[test]
    fn wrong_j_invariant_is_rejected() {
        let text = QI.replace("\"a4\": \"-1\"", "\"a4\": \"-2\"").replace("\"a6\": \"0\"", "\"a6\": \"1\"");
        assert!(matches!(Preset::from_json(&text, None), Err(Error::PresetParse(_))));
    }
}
