//! Text formats shared by the CLI and the experiment drivers.

use std::io::Write;

use crate::epidemic::TrialRecord;
use crate::error::Result;
use crate::experiments::{CensusRow, SweepRow, ValidationRow};

/// Formats like C's `%.12g`: 12 significant digits, trailing zeros removed,
/// scientific notation for exponents below -4 or at least 12.
pub fn fmt_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const FIGURE1_HEADER: &str = "c,p,mu,beta,gamma,R0,pi,K,near_critical";
pub const VALIDATION_HEADER: &str = "c,mu,p,n,trials,pi_theory,pi_hat,stderr,z";
pub const CENSUS_HEADER: &str = "n,beta,gamma,p,replicate,k4,k4prime";
pub const TRIALS_HEADER: &str = "trial,seed,final_size,generations,is_large";

pub fn write_figure1<W: Write>(mut w: W, rows: &[SweepRow]) -> Result<()> {
    writeln!(w, "{FIGURE1_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            fmt_g(r.c),
            fmt_g(r.p),
            fmt_g(r.mu),
            fmt_g(r.beta),
            fmt_g(r.gamma),
            fmt_g(r.r_nought),
            fmt_g(r.pi),
            r.truncation_k,
            r.near_critical as u8
        )?;
    }
    Ok(())
}

pub fn write_validation<W: Write>(mut w: W, rows: &[ValidationRow]) -> Result<()> {
    writeln!(w, "{VALIDATION_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            fmt_g(r.c),
            fmt_g(r.mu),
            fmt_g(r.p),
            r.n,
            r.trials,
            fmt_g(r.pi_theory),
            fmt_g(r.pi_hat),
            fmt_g(r.stderr),
            fmt_g(r.z)
        )?;
    }
    Ok(())
}

pub fn write_census<W: Write>(mut w: W, rows: &[CensusRow]) -> Result<()> {
    writeln!(w, "{CENSUS_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.n,
            fmt_g(r.beta),
            fmt_g(r.gamma),
            fmt_g(r.p),
            r.replicate,
            r.k4,
            r.k4_prime
        )?;
    }
    Ok(())
}

pub fn write_trials<W: Write>(mut w: W, records: &[TrialRecord]) -> Result<()> {
    writeln!(w, "{TRIALS_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.trial_index, r.seed, r.final_size, r.num_generations, r.is_large as u8
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.5, "0.5"),
            (4.0, "4"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (1e-3, "0.001"),
            (1.5e-5, "1.5e-05"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (-0.25, "-0.25"),
            (0.0, "0"),
            (1e300, "1e+300"),
            (0.015625, "0.015625"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
    }

    #[test]
    fn rounding_carries_into_exponent() {
        assert_eq!(fmt_g(9.9999999999999e-5), "0.0001");
        assert_eq!(fmt_g(999999999999.9), "1e+12");
    }
}
