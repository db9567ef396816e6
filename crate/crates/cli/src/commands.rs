use std::fs;
use std::path::Path;

use num_complex::Complex64;
use ptreal_core::spectra::{convergence_sweep, spectrum_report};
use ptreal_core::verify::{self, VerifyOptions};
use ptreal_core::{
    hamiltonian_matrix, phase_unitary, realify as realify_matrix, AntiunitaryRep, AntiunitaryTag, BasisTag, Error,
    OperatorMatrix, PotentialSpec, RealMatrix, Recipe, Transform,
};

use crate::{BuildArgs, MatrixInput, RealifyArgs, RecipeName, SpectrumArgs, SweepArgs, VerifyArgs};

/// Process exit code with the message printed to stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self {
            code: 2,
            message: format!("{}: {err}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::IncompleteBasis { .. } => 3,
            Error::RealityViolation { .. } => 4,
            Error::NoConvergence { .. } => 5,
            Error::ClosureViolation { .. } => 6,
            _ => 1,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::io(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn check_tol(name: &str, tol: f64) -> CmdResult {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Failure::usage(format!("{name} must be positive, got {tol}")))
    }
}

fn load_potential(path: &Path) -> Result<PotentialSpec, Failure> {
    let p = PotentialSpec::parse(&read(path)?)?;
    if let Some(w) = p.confinement_warning() {
        eprintln!("warning: {w}");
    }
    Ok(p)
}

pub fn build(args: BuildArgs) -> CmdResult {
    let p = load_potential(&args.potential)?;
    let h = hamiltonian_matrix(&p, args.n_basis)?;
    let violation = AntiunitaryRep::pt_ho(args.n_basis)?.check_a_symmetry(&h)?;
    emit(args.out.as_deref(), &with_newline(h.to_json()))?;
    eprintln!("A-symmetry max violation: {violation:e}");
    Ok(())
}

/// The Hamiltonian and its antiunitary, from either input form.
fn load_input(input: &MatrixInput) -> Result<(OperatorMatrix, AntiunitaryRep), Failure> {
    let h = match (&input.source.potential, &input.source.matrix) {
        (Some(path), None) => {
            let n = input
                .n_basis
                .ok_or_else(|| Failure::usage("--n is required with --potential"))?;
            hamiltonian_matrix(&load_potential(path)?, n)?
        }
        (None, Some(path)) => {
            let label = path.display().to_string();
            OperatorMatrix::from_json(&read(path)?, label)?
        }
        _ => return Err(Failure::usage("exactly one of --potential or --matrix is required")),
    };
    let a = match &input.antiunitary {
        Some(path) => AntiunitaryRep::from_json(&read(path)?)?,
        None if h.basis == BasisTag::Ho => AntiunitaryRep::pt_ho(h.n_basis())?,
        None => return Err(Failure::usage("a raw-basis matrix needs --antiunitary")),
    };
    if a.n_basis() != h.n_basis() {
        return Err(Error::DimensionMismatch {
            expected: h.n_basis(),
            got: a.n_basis(),
        }
        .into());
    }
    Ok((h, a))
}

fn parse_porter(text: &str) -> Result<Complex64, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let parsed = match parts.as_slice() {
        [re, im] => re.parse::<f64>().ok().zip(im.parse::<f64>().ok()),
        _ => None,
    };
    match parsed {
        Some((re, im)) if re.is_finite() && im.is_finite() && (re, im) != (0.0, 0.0) => Ok(Complex64::new(re, im)),
        _ => Err(Failure::usage(format!(
            "--porter-a expects nonzero RE,IM, got {text:?}"
        ))),
    }
}

fn realified(input: &MatrixInput) -> Result<RealMatrix, Failure> {
    check_tol("--tol-reality", input.tol_reality)?;
    let (h, a) = load_input(input)?;

    let violation = a.check_a_symmetry(&h)?;
    let limit = input.tol_reality * h.max_abs();
    if violation > limit {
        return Err(Error::RealityViolation {
            residual: violation,
            tol: limit,
        }
        .into());
    }

    let default = if a.tag() == AntiunitaryTag::PtHo {
        RecipeName::PhaseUnitary
    } else {
        RecipeName::ProjectorPhase
    };
    let recipe = match input.recipe.unwrap_or(default) {
        RecipeName::PhaseUnitary => {
            if a.tag() != AntiunitaryTag::PtHo {
                return Err(Error::RecipeNeedsPtHo {
                    recipe: "phase_unitary",
                }
                .into());
            }
            let u = phase_unitary(h.n_basis())?;
            return Ok(realify_matrix(&h, Transform::Phase(&u), input.tol_reality)?);
        }
        RecipeName::ProjectorPhase => Recipe::ProjectorPhase,
        RecipeName::PhasePower => Recipe::PhasePower,
        RecipeName::Porter => Recipe::Porter(parse_porter(&input.porter_a)?),
        RecipeName::Bender => Recipe::Bender,
    };
    let basis = a.adapted_basis(recipe, None)?;
    if recipe == Recipe::Bender {
        println!(
            "bender basis: rank {} of {}, {} columns dropped",
            basis.rank,
            basis.n_basis(),
            basis.dropped
        );
    }
    Ok(realify_matrix(&h, Transform::Adapted(&basis), input.tol_reality)?)
}

pub fn realify(args: RealifyArgs) -> CmdResult {
    let real = realified(&args.input)?;
    emit(args.out.as_deref(), &with_newline(real.to_json()))?;
    eprintln!("imag_residual: {:e}", real.imag_residual);
    Ok(())
}

pub fn spectrum(args: SpectrumArgs) -> CmdResult {
    check_tol("--tol-classify", args.tol_classify)?;
    let real = realified(&args.input)?;
    let report = spectrum_report(&real.entries, args.tol_classify)?;
    emit(args.out.as_deref(), &with_newline(report.to_json()))?;
    eprintln!(
        "real eigenvalues: {}, conjugate pairs: {}",
        report.real_set.len(),
        report.pairs.len()
    );
    Ok(())
}

pub fn sweep(args: SweepArgs) -> CmdResult {
    let p = load_potential(&args.potential)?;
    let table = convergence_sweep(&p, &args.n_list, args.m_track)?;
    emit(args.out.as_deref(), &table.to_csv())
}

fn faulty_phase_unitary(n: usize) -> ptreal_core::Result<Vec<Complex64>> {
    let mut u = phase_unitary(n)?;
    for z in u.iter_mut().skip(1).step_by(2) {
        *z = Complex64::new(-1.0, 0.0);
    }
    Ok(u)
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    let mut opts = VerifyOptions::default();
    match args.inject_fault.as_deref() {
        None => {}
        Some("phase-sign") => opts.phase_unitary = faulty_phase_unitary,
        Some(other) => return Err(Failure::usage(format!("unknown fault {other:?}"))),
    }

    let outcomes = match &args.group {
        Some(name) => {
            let outcome = verify::run_group(name, &opts).ok_or_else(|| {
                Failure::usage(format!(
                    "unknown group {name:?}; expected one of {}",
                    verify::GROUPS.join(", ")
                ))
            })?;
            vec![(name.as_str(), outcome)]
        }
        None => verify::run_all(&opts),
    };

    let mut first_failure = None;
    for (group, outcome) in outcomes {
        match outcome {
            Ok(()) => println!("PASS {group}"),
            Err(f) => {
                println!("FAIL {group}: {f}");
                first_failure.get_or_insert(f);
            }
        }
    }
    match first_failure {
        None => Ok(()),
        Some(f) => Err(Failure {
            code: 7,
            message: format!("invariant {:?} failed in group {}: {}", f.check, f.group, f.detail),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(code(Error::DuplicatePower(3)), 1);
        assert_eq!(
            code(Error::PtViolation {
                power: 2,
                re: 0.0,
                im: 1.0
            }),
            1
        );
        assert_eq!(
            code(Error::IncompleteBasis {
                rank: 4,
                n: 8,
                dropped: 4
            }),
            3
        );
        assert_eq!(
            code(Error::RealityViolation {
                residual: 1.0,
                tol: 0.0
            }),
            4
        );
        assert_eq!(
            code(Error::NoConvergence {
                iterations: 40,
                block: 1
            }),
            5
        );
        assert_eq!(code(Error::ClosureViolation { re: 0.0, im: 1.0 }), 6);
    }

    #[test]
    fn porter_coefficient() {
        assert_eq!(parse_porter("0.5, -2").unwrap(), Complex64::new(0.5, -2.0));
        assert!(parse_porter("0,0").is_err());
        assert!(parse_porter("1").is_err());
        assert!(parse_porter("a,b").is_err());
    }
}
