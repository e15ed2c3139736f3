use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use trisect::forms::{parse_form, Family, FormError, FormJson, TriForm};
use trisect::gf::{FiniteField, GaloisField};
use trisect::verify::FormSource;

use crate::CliError;

/// Exactly one of --catalog, --form, --text.
#[derive(Args)]
pub struct FormArgs {
    /// Catalog form: fano7, spread_odd, spread_even_hodd, spread_even_heven, t_prime, t_double_prime, ts6, ts10
    #[arg(long)]
    pub catalog: Option<String>,
    /// Form as a JSON file {"n", "q", "coeffs": [[i, j, k, [c0, ...]], ...]}
    #[arg(long)]
    pub form: Option<PathBuf>,
    /// Inline form such as "f123+mu*f156-f246"
    #[arg(long)]
    pub text: Option<String>,
    /// Field order
    #[arg(long)]
    pub q: Option<u64>,
    /// Field element bound to mu (packed integer)
    #[arg(long)]
    pub mu: Option<u32>,
    /// Dimension for --text [default: largest index used]
    #[arg(long)]
    pub n: Option<usize>,
}

pub fn field(q: Option<u64>) -> Result<GaloisField, CliError> {
    let q = q.ok_or_else(|| CliError::usage("--q", "required with --catalog and --text"))?;
    GaloisField::from_order(q).map_err(|e| CliError::usage("--q", e))
}

pub fn read_form(path: &Path, flag: &'static str) -> Result<TriForm, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(flag, format!("{}: {e}", path.display())))?;
    let json: FormJson = serde_json::from_str(&text).map_err(|e| CliError::usage(flag, format!("{}: {e}", path.display())))?;
    TriForm::from_json(&json).map_err(|e| CliError::usage(flag, format!("{}: {e}", path.display())))
}

fn catalog_flag(e: &FormError) -> &'static str {
    match e {
        FormError::UnknownFamily(_) => "--catalog",
        FormError::InvalidParameter(m) if m.starts_with("mu") || m.contains(" mu") => "--mu",
        _ => "--q",
    }
}

impl FormArgs {
    /// The form and the flag it came from.
    pub fn resolve(&self) -> Result<(TriForm, &'static str), CliError> {
        let given = [self.catalog.is_some(), self.form.is_some(), self.text.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(CliError::usage("--catalog", "give exactly one of --catalog, --form, --text"));
        }
        if let Some(name) = &self.catalog {
            let family = Family::from_str(name).map_err(|e| CliError::usage("--catalog", e))?;
            let f = field(self.q)?;
            let t = family.build(&f, self.mu).map_err(|e| CliError::usage(catalog_flag(&e), e))?;
            return Ok((t, "--catalog"));
        }
        if let Some(path) = &self.form {
            let t = read_form(path, "--form")?;
            if let Some(q) = self.q {
                if q != t.field().q() as u64 {
                    return Err(CliError::usage("--q", format!("the form file is over GF({})", t.field().q())));
                }
            }
            return Ok((t, "--form"));
        }
        let text = self.text.as_deref().unwrap_or_default();
        let f = field(self.q)?;
        if let Some(mu) = self.mu {
            if !f.contains(mu) {
                return Err(CliError::usage("--mu", format!("{mu} is not an element of GF({})", f.q())));
            }
        }
        let t = parse_form(text, &f, self.n, self.mu).map_err(|e| match e {
            FormError::BadDimension(_) => CliError::usage("--n", e),
            _ => CliError::usage("--text", e),
        })?;
        Ok((t, "--text"))
    }
}

/// Catalog forms, with some replaced per field order.
pub struct Overrides(HashMap<(Family, u32), TriForm>);

impl Overrides {
    pub fn parse(specs: &[String]) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        for spec in specs {
            let (name, path) = spec
                .split_once('=')
                .ok_or_else(|| CliError::usage("--override", format!("expected NAME=FILE, got `{spec}`")))?;
            let family = Family::from_str(name).map_err(|e| CliError::usage("--override", e))?;
            let t = read_form(Path::new(path), "--override")?;
            if t.n() != family.dimension() {
                return Err(CliError::usage(
                    "--override",
                    format!("{name} is {}-dimensional, the file has n = {}", family.dimension(), t.n()),
                ));
            }
            map.insert((family, t.field().q()), t);
        }
        Ok(Overrides(map))
    }
}

impl FormSource for Overrides {
    fn form(&self, family: Family, field: &GaloisField, mu: Option<u32>) -> TriForm {
        match self.0.get(&(family, field.q())) {
            Some(t) => t.clone(),
            None => family.pattern(field, mu),
        }
    }
}
