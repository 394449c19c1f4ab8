//! Batch front end: one JSON job in, one JSON report out.

pub mod schema;

use num_rational::BigRational;
use num_traits::Zero;
use parastab::exactnum::{Field, FieldAlgorithms, FieldSpec, Matrix, PrimeField, Rationals, Subspace};
use parastab::fine_moduli::{bezout_certificate, FineInput};
use parastab::fuchsian::{
    classify_stability, graded_invariants, hn_filtration, interp_sweep, jh_filtration, validate_lambda_connection,
    CheckMode, EnumerationOrder, Filtration, FuchsianLambdaSystem, DEGREE_ZERO_CAVEAT,
};
use parastab::git_grass::{
    classify_git, classify_git_candidates, mu_factor, mu_total, verify_hilbert_mumford, GrassConfig, GrassFactor, OnePS,
};
use parastab::logops::{
    associativity_check, filtration_check, residue_well_defined, total_residue, LogDiffOperator, PolyFn, PolySection,
};
use parastab::parabolic::{ParabolicSpace, WeightSystem};
use parastab::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use schema::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Exhaustive,
    Burnside,
    Candidates,
}

#[derive(Clone, Debug)]
pub struct Options {
    pub budget: u64,
    pub field: Option<FieldSpec>,
    pub mode: Option<Mode>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub doc: ErrorOut,
}

impl Failure {
    pub fn schema(path: Option<String>, message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            doc: ErrorOut {
                error: "schema",
                path,
                message: message.into(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("error documents serialize") + "\n"
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, error, path) = match &e {
            Error::BudgetExceeded { .. } => (2, "budget", None),
            Error::Precondition(_) | Error::NotFine { .. } => (3, "precondition", None),
            Error::InvalidWeights { path, .. } | Error::InvalidFlag { path, .. } | Error::Invalid { path, .. } => {
                (1, "schema", Some(format!("payload.{path}")))
            }
            _ => (1, "schema", None),
        };
        Failure {
            code,
            doc: ErrorOut {
                error,
                path,
                message: e.to_string(),
            },
        }
    }
}

type Out = Result<String, Failure>;

/// Runs one job. `kind` is the job kind requested on the command line and
/// must match the one in the file.
pub fn run(kind: JobKind, input: &str, opts: &Options) -> Out {
    let job: JobFile = parse_json(input, "")?;
    if job.version != VERSION {
        return Err(Failure::schema(
            Some("version".into()),
            format!("unsupported version {}, expected {VERSION}", job.version),
        ));
    }
    if job.kind != kind {
        return Err(Failure::schema(
            Some("kind".into()),
            format!("file holds a {} job, {} was requested", kind_name(job.kind), kind_name(kind)),
        ));
    }
    let payload = job.payload.to_string();
    match kind {
        JobKind::Stability | JobKind::Hn | JobKind::Jh | JobKind::Interp => {
            let p: SystemPayload = parse_json(&payload, "payload")?;
            match pick_field(opts, p.field)? {
                FieldSpec::Rationals => run_system(kind, &Rationals, &p, opts),
                FieldSpec::Prime(q) => run_system(kind, &PrimeField::new(q)?, &p, opts),
            }
        }
        JobKind::Git => {
            let p: GitPayload = parse_json(&payload, "payload")?;
            match pick_field(opts, p.field)? {
                FieldSpec::Rationals => {
                    let cfg = build_grass(&Rationals, p.n, &p.factors)?;
                    let candidates = p.candidates.as_ref().ok_or_else(|| {
                        Failure::from(Error::Precondition("over q the git criterion needs payload.candidates".into()))
                    })?;
                    let list = parse_subspaces(&Rationals, p.n, candidates, "candidates")?;
                    let rep = classify_git_candidates(&cfg, &list)?;
                    emit(&git_out(&cfg, rep, None))
                }
                FieldSpec::Prime(q) => {
                    let f = PrimeField::new(q)?;
                    let cfg = build_grass(&f, p.n, &p.factors)?;
                    let rep = match (&p.candidates, opts.mode) {
                        (Some(c), Some(Mode::Candidates)) => {
                            classify_git_candidates(&cfg, &parse_subspaces(&f, p.n, c, "candidates")?)?
                        }
                        _ => classify_git(&cfg, opts.budget)?,
                    };
                    let hm = if p.verify {
                        let hm = verify_hilbert_mumford(&cfg, opts.budget)?;
                        Some(HilbertMumfordOut {
                            min_mu: hm.min_mu.as_ref().map(ToString::to_string),
                            minimizer_basis: hm.minimizer.as_ref().map(|o| matrix_rows(o.basis())),
                            minimizer_weights: hm.minimizer.as_ref().map(|o| o.weights().to_vec()),
                            agrees: hm.agrees,
                            bases_checked: hm.bases_checked,
                        })
                    } else {
                        None
                    };
                    emit(&git_out(&cfg, rep, hm))
                }
            }
        }
        JobKind::Mu => {
            let p: MuPayload = parse_json(&payload, "payload")?;
            match pick_field(opts, p.field)? {
                FieldSpec::Rationals => run_mu(&Rationals, &p),
                FieldSpec::Prime(q) => run_mu(&PrimeField::new(q)?, &p),
            }
        }
        JobKind::Fine => {
            let p: FinePayload = parse_json(&payload, "payload")?;
            let input = FineInput::new(p.d, p.r, p.g, p.punctures)?;
            let gcd = input.gcd();
            let certificate = if gcd == 1 {
                Some(CertificateOut::new(&input, &bezout_certificate(&input)?))
            } else {
                None
            };
            emit(&FineOut {
                kind,
                fine: gcd == 1,
                gcd,
                certificate,
            })
        }
        JobKind::LogopsDemo => {
            let p: LogopsPayload = parse_json(&payload, "payload")?;
            run_logops(&p)
        }
    }
}

fn parse_json<T: DeserializeOwned>(text: &str, prefix: &str) -> Result<T, Failure> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let inner = e.path().to_string();
        let path = match (prefix.is_empty(), inner.as_str()) {
            (true, _) => inner.clone(),
            (false, ".") => prefix.to_string(),
            (false, _) => format!("{prefix}.{inner}"),
        };
        // positions refer to the re-serialized payload, so drop them
        let msg = e.inner().to_string();
        let msg = match msg.rfind(" at line ") {
            Some(i) => msg[..i].to_string(),
            None => msg,
        };
        Failure::schema(Some(path), msg)
    })
}

fn kind_name(kind: JobKind) -> String {
    serde_json::to_value(kind).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn emit<T: Serialize>(report: &T) -> Out {
    Ok(serde_json::to_string_pretty(report).expect("reports serialize") + "\n")
}

fn pick_field(opts: &Options, payload: Option<FieldSpec>) -> Result<FieldSpec, Failure> {
    Ok(opts.field.or(payload).unwrap_or(FieldSpec::Rationals))
}

fn schema_err(path: &str, e: Error) -> Failure {
    Failure::schema(Some(format!("payload.{path}")), e.to_string())
}

fn parse_elem<F: Field>(f: &F, s: &str, path: &str) -> Result<F::Elem, Failure> {
    f.parse(s).map_err(|e| schema_err(path, e))
}

fn parse_rational_at(s: &str, path: &str) -> Result<BigRational, Failure> {
    parastab::exactnum::field::parse_rational(s).map_err(|e| schema_err(path, e))
}

fn parse_rows<F: Field>(f: &F, rows: &Rows, cols: usize, path: &str) -> Result<Vec<Vec<F::Elem>>, Failure> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != cols {
                return Err(Failure::schema(
                    Some(format!("payload.{path}[{i}]")),
                    format!("expected {cols} entries, found {}", row.len()),
                ));
            }
            row.iter()
                .enumerate()
                .map(|(j, s)| parse_elem(f, s, &format!("{path}[{i}][{j}]")))
                .collect()
        })
        .collect()
}

fn parse_matrix<F: Field>(f: &F, rows: &Rows, shape: (usize, usize), path: &str) -> Result<Matrix<F>, Failure> {
    if rows.len() != shape.0 {
        return Err(Failure::schema(
            Some(format!("payload.{path}")),
            format!("expected {} rows, found {}", shape.0, rows.len()),
        ));
    }
    Ok(Matrix::from_rows(f, shape.1, parse_rows(f, rows, shape.1, path)?)?)
}

fn parse_subspace<F: Field>(f: &F, n: usize, rows: &Rows, path: &str) -> Result<Subspace<F>, Failure> {
    Ok(Subspace::span(f, n, parse_rows(f, rows, n, path)?)?)
}

fn parse_subspaces<F: Field>(f: &F, n: usize, list: &[Rows], path: &str) -> Result<Vec<Subspace<F>>, Failure> {
    list.iter()
        .enumerate()
        .map(|(i, rows)| parse_subspace(f, n, rows, &format!("{path}[{i}]")))
        .collect()
}

fn matrix_rows<F: Field>(m: &Matrix<F>) -> Rows {
    let f = m.field();
    m.row_vecs().iter().map(|r| r.iter().map(|c| f.format(c)).collect()).collect()
}

fn subspace_rows<F: Field>(w: &Subspace<F>) -> Rows {
    matrix_rows(w.basis())
}

fn build_system<F: Field>(f: &F, p: &SystemPayload) -> Result<FuchsianLambdaSystem<F>, Failure> {
    let r = p.punctures.first().map_or(0, |x| x.residue.len());
    let mut weights = Vec::new();
    for (j, x) in p.punctures.iter().enumerate() {
        let ws = x
            .weights
            .iter()
            .enumerate()
            .map(|(i, s)| parse_rational_at(s, &format!("punctures[{j}].weights[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        weights.push((x.id.clone(), ws));
    }
    let ws = WeightSystem::new(weights)?;
    let mut flags = Vec::new();
    let mut residues = Vec::new();
    for (j, x) in p.punctures.iter().enumerate() {
        flags.push(
            x.flag
                .iter()
                .enumerate()
                .map(|(i, rows)| parse_subspace(f, r, rows, &format!("punctures[{j}].flag[{i}]")))
                .collect::<Result<Vec<_>, _>>()?,
        );
        residues.push(parse_matrix(f, &x.residue, (r, r), &format!("punctures[{j}].residue"))?);
    }
    let space = ParabolicSpace::from_interior(f, r, p.degree, ws, flags)?;
    let lambda = parse_elem(f, &p.lambda, "lambda")?;
    Ok(FuchsianLambdaSystem::new(space, residues, lambda)?)
}

fn check_mode<F: FieldAlgorithms>(
    f: &F,
    r: usize,
    p: &SystemPayload,
    opts: &Options,
) -> Result<CheckMode<F>, Failure> {
    let default = match f.spec() {
        FieldSpec::Rationals => Mode::Burnside,
        FieldSpec::Prime(_) => Mode::Exhaustive,
    };
    Ok(match opts.mode.unwrap_or(default) {
        Mode::Exhaustive => CheckMode::Exhaustive,
        Mode::Burnside => CheckMode::Burnside,
        Mode::Candidates => {
            let list = p.candidates.as_ref().ok_or_else(|| {
                Failure::from(Error::Precondition("candidates mode needs payload.candidates".into()))
            })?;
            CheckMode::Candidates(parse_subspaces(f, r, list, "candidates")?)
        }
    })
}

fn filtration_out<F: Field>(kind: JobKind, f: &F, filt: &Filtration<F>) -> FiltrationOut {
    FiltrationOut {
        kind,
        field: f.spec(),
        steps: filt.steps.iter().map(subspace_rows).collect(),
        slopes: filt.slopes.iter().map(ToString::to_string).collect(),
        graded: None,
        caveat: DEGREE_ZERO_CAVEAT,
    }
}

fn run_system<F: FieldAlgorithms>(kind: JobKind, f: &F, p: &SystemPayload, opts: &Options) -> Out {
    let sys = build_system(f, p)?;
    let mode = check_mode(f, sys.rank(), p, opts)?;
    match kind {
        JobKind::Stability => {
            let rep = classify_stability(&sys, &mode, opts.budget)?;
            emit(&StabilityOut {
                kind,
                field: f.spec(),
                verdict: rep.verdict,
                slope: rep.slope.to_string(),
                witness: rep.witness.as_ref().map(|(w, s)| WitnessOut {
                    basis: subspace_rows(w),
                    slope: s.to_string(),
                }),
                checked_mode: rep.checked_mode,
                relative_to_checked_family: rep.relative_to_checked_family,
                validation: validate_lambda_connection(&sys)?,
                caveat: rep.caveat,
            })
        }
        JobKind::Hn => {
            let hn = hn_filtration(&sys, &mode, EnumerationOrder::Forward, opts.budget)?;
            emit(&filtration_out(kind, f, &hn))
        }
        JobKind::Jh => {
            let jh = jh_filtration(&sys, &mode, opts.budget)?;
            let mut out = filtration_out(kind, f, &jh);
            out.graded = Some(graded_invariants(&sys, &mode, opts.budget)?);
            emit(&out)
        }
        JobKind::Interp => {
            let mus = match &p.mus {
                Some(list) => list
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_elem(f, s, &format!("mus[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?,
                None => vec![f.one()],
            };
            emit(&InterpOut {
                kind,
                field: f.spec(),
                table: interp_sweep(&sys, &mus, &mode, opts.budget)?,
                caveat: DEGREE_ZERO_CAVEAT,
            })
        }
        _ => unreachable!("system jobs only"),
    }
}

fn build_grass<F: Field>(f: &F, n: usize, factors: &[FactorPayload]) -> Result<GrassConfig<F>, Failure> {
    let mut out = Vec::new();
    for (i, fac) in factors.iter().enumerate() {
        let path = format!("factors[{i}]");
        let epsilon = parse_rational_at(&fac.epsilon, &format!("{path}.epsilon"))?;
        let nm = n * fac.m;
        let g = match (&fac.phi, &fac.kernel) {
            (Some(phi), None) => GrassFactor {
                m: fac.m,
                phi: Matrix::from_rows(f, nm, parse_rows(f, phi, nm, &format!("{path}.phi"))?)?,
                epsilon,
            },
            (None, Some(k)) => {
                GrassFactor::from_kernel(fac.m, &parse_subspace(f, nm, k, &format!("{path}.kernel"))?, epsilon)
            }
            _ => {
                return Err(Failure::schema(
                    Some(format!("payload.{path}")),
                    "give exactly one of phi and kernel",
                ))
            }
        };
        out.push(g);
    }
    Ok(GrassConfig::new(f, n, out)?)
}

fn git_out<F: Field>(
    cfg: &GrassConfig<F>,
    rep: parastab::git_grass::GitReport<F>,
    hm: Option<HilbertMumfordOut>,
) -> GitOut {
    GitOut {
        kind: JobKind::Git,
        field: cfg.field().spec(),
        verdict: rep.verdict,
        witness: rep.witness.as_ref().map(subspace_rows),
        margin: rep.margin.as_ref().map(ToString::to_string),
        rhs: rep.rhs.to_string(),
        complete: rep.complete,
        hilbert_mumford: hm,
    }
}

fn run_mu<F: Field>(f: &F, p: &MuPayload) -> Out {
    let cfg = build_grass(f, p.n, &p.factors)?;
    let basis = parse_matrix(f, &p.one_ps.basis, (p.n, p.n), "one_ps.basis")?;
    let ops = OnePS::new(basis, p.one_ps.weights.clone()).map_err(|e| match e {
        Error::Invalid { path, reason } => Error::Invalid {
            path: format!("one_ps.{path}"),
            reason,
        },
        e => e,
    })?;
    let per_factor = cfg
        .factors()
        .iter()
        .map(|g| mu_factor(&g.kernel(), g.m, &ops))
        .collect::<parastab::Result<Vec<_>>>()?;
    emit(&MuOut {
        kind: JobKind::Mu,
        field: f.spec(),
        per_factor,
        mu_total: mu_total(&cfg, &ops)?.to_string(),
    })
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    parastab::exactnum::field::rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

fn random_poly(rng: &mut ChaCha8Rng, max_degree: usize) -> PolyFn {
    let deg = rng.gen_range(0..=max_degree);
    PolyFn::new((0..=deg).map(|_| random_rational(rng)).collect())
}

fn run_logops(p: &LogopsPayload) -> Out {
    if p.max_rank == 0 {
        return Err(Failure::schema(Some("payload.max_rank".into()), "must be positive"));
    }
    let q = Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (mut assoc, mut collapse, mut factor, mut well) = (0, 0, 0, 0);
    for _ in 0..p.trials {
        let r = rng.gen_range(1..=p.max_rank);
        let op = LogDiffOperator::new(random_poly(&mut rng, p.max_degree), random_poly(&mut rng, p.max_degree));
        let f = random_poly(&mut rng, p.max_degree);
        let lambda = random_rational(&mut rng);
        let mut a = Matrix::zeros(&q, r, r);
        for i in 0..r {
            for j in 0..r {
                a.set(i, j, random_rational(&mut rng));
            }
        }
        let comps: Vec<PolyFn> = (0..r).map(|_| random_poly(&mut rng, p.max_degree)).collect();
        let s = PolySection::new(comps.clone(), a.clone(), lambda.clone())?;
        assoc += usize::from(associativity_check(&op, &f, &s, &lambda));
        collapse += usize::from(op.right_product(&f, &BigRational::zero()) == op.left_product(&f));

        let v: Vec<BigRational> = (0..r).map(|_| random_rational(&mut rng)).collect();
        let bump = random_poly(&mut rng, p.max_degree).mul(&PolyFn::z());
        let moved = LogDiffOperator::new(op.g.add(&bump), op.t.add(&bump));
        factor += usize::from(total_residue(&op, &a, &v)? == total_residue(&moved, &a, &v)?);

        let vanishing: Vec<PolyFn> = comps.iter().map(|c| c.mul(&PolyFn::z())).collect();
        let s0 = PolySection::new(vanishing, a, lambda)?;
        well += usize::from(residue_well_defined(&op, &s0) == Some(true));
    }
    let gens = [LogDiffOperator::function(PolyFn::one()), LogDiffOperator::theta()];
    emit(&LogopsOut {
        kind: JobKind::LogopsDemo,
        seed: p.seed,
        trials: p.trials,
        associativity_passed: assoc,
        lambda_zero_collapse_passed: collapse,
        residue_factorization_passed: factor,
        residue_well_defined_passed: well,
        filtration: filtration_check(&gens, &parastab::exactnum::field::int(1))?,
    })
}
