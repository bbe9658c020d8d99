//! HDF5 exchange files.
//!
//! Problem file:
//!
//! | path                  | kind      | contents                           |
//! |-----------------------|-----------|------------------------------------|
//! | `/matrix/real`        | dataset   | float64, shape `(2^n, 2^n)`        |
//! | `/matrix/imag`        | dataset   | float64, shape `(2^n, 2^n)`        |
//! | `/eigenvector/real`   | dataset   | float64, shape `(2^n,)`            |
//! | `/eigenvector/imag`   | dataset   | float64, shape `(2^n,)`            |
//! | `n_mat`               | root attr | int64                              |
//! | `format_version`      | root attr | int64, currently 1                 |
//! | `reference_phase`     | root attr | float64, optional                  |
//! | `provenance`          | root attr | string, optional                   |
//! | `seed`                | root attr | int64, optional                    |
//! | `eigenvector_index`   | root attr | int64, optional                    |
//!
//! Statevector file: `/statevector/real` and `/statevector/imag` (float64,
//! length `2^(n_meas+n_mat)`) with root attributes `n_meas`, `n_mat`,
//! `format_version` and `bit_convention` (string).
//!
//! Matrices are row-major. Complex values are split into real and imaginary
//! datasets; payloads round-trip bit for bit.

use std::path::Path;
use std::str::FromStr;

use hdf5::types::VarLenUnicode;
use hdf5::{File, Group, Location};
use num_complex::Complex64;

use crate::error::{QpeError, Result};
use crate::layout::{RegisterLayout, BIT_CONVENTION};
use crate::operator::DenseOperator;
use crate::problems::{Provenance, SpectralProblem};
use crate::state::StateVector;

pub const FORMAT_VERSION: i64 = 1;

fn format_err(msg: impl Into<String>) -> QpeError {
    QpeError::Format(msg.into())
}

fn open_existing(path: &Path) -> Result<File> {
    if !path.exists() {
        return Err(QpeError::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{} does not exist", path.display()),
        )));
    }
    File::open(path).map_err(|e| {
        QpeError::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("cannot open {} as HDF5: {e}", path.display()),
        ))
    })
}

fn write_attr_i64(loc: &Location, name: &str, value: i64) -> Result<()> {
    loc.new_attr::<i64>().create(name)?.write_scalar(&value)?;
    Ok(())
}

fn write_attr_f64(loc: &Location, name: &str, value: f64) -> Result<()> {
    loc.new_attr::<f64>().create(name)?.write_scalar(&value)?;
    Ok(())
}

fn write_attr_str(loc: &Location, name: &str, value: &str) -> Result<()> {
    let s = VarLenUnicode::from_str(value).map_err(|e| format_err(format!("attribute {name}: {e}")))?;
    loc.new_attr::<VarLenUnicode>().create(name)?.write_scalar(&s)?;
    Ok(())
}

fn has_attr(loc: &Location, name: &str) -> Result<bool> {
    Ok(loc.attr_names()?.iter().any(|n| n == name))
}

fn read_attr_i64(loc: &Location, name: &str) -> Result<i64> {
    if !has_attr(loc, name)? {
        return Err(format_err(format!("missing attribute '{name}'")));
    }
    Ok(loc.attr(name)?.read_scalar::<i64>()?)
}

fn read_opt_attr_i64(loc: &Location, name: &str) -> Result<Option<i64>> {
    if !has_attr(loc, name)? {
        return Ok(None);
    }
    Ok(Some(loc.attr(name)?.read_scalar::<i64>()?))
}

fn read_opt_attr_f64(loc: &Location, name: &str) -> Result<Option<f64>> {
    if !has_attr(loc, name)? {
        return Ok(None);
    }
    Ok(Some(loc.attr(name)?.read_scalar::<f64>()?))
}

fn read_opt_attr_str(loc: &Location, name: &str) -> Result<Option<String>> {
    if !has_attr(loc, name)? {
        return Ok(None);
    }
    Ok(Some(loc.attr(name)?.read_scalar::<VarLenUnicode>()?.as_str().to_owned()))
}

fn check_version(file: &File) -> Result<()> {
    let v = read_attr_i64(file, "format_version")?;
    if v != FORMAT_VERSION {
        return Err(format_err(format!("unsupported format_version {v}")));
    }
    Ok(())
}

fn write_complex(group: &Group, shape: &[usize], values: &[Complex64]) -> Result<()> {
    let re: Vec<f64> = values.iter().map(|z| z.re).collect();
    let im: Vec<f64> = values.iter().map(|z| z.im).collect();
    for (name, data) in [("real", re), ("imag", im)] {
        let ds = group.new_dataset::<f64>().shape(shape).create(name)?;
        ds.write_raw(&data)?;
    }
    Ok(())
}

/// Reads `<group>/real` and `<group>/imag`, returning the shared shape and
/// the complex values in row-major order.
fn read_complex(file: &File, group: &str) -> Result<(Vec<usize>, Vec<Complex64>)> {
    let open = |part: &str| {
        let path = format!("{group}/{part}");
        file.dataset(&path)
            .map_err(|_| format_err(format!("missing dataset '/{path}'")))
    };
    let re_ds = open("real")?;
    let im_ds = open("imag")?;
    let shape = re_ds.shape();
    if im_ds.shape() != shape {
        return Err(QpeError::Dimension(format!(
            "/{group}: real shape {:?} differs from imag shape {:?}",
            shape,
            im_ds.shape()
        )));
    }
    let re: Vec<f64> = re_ds.read_raw()?;
    let im: Vec<f64> = im_ds.read_raw()?;
    let values = re.into_iter().zip(im).map(|(r, i)| Complex64::new(r, i)).collect();
    Ok((shape, values))
}

/// Writes eigenvector `eigenvector_index` of `problem` together with its
/// matrix. The reference phase is stored when known.
pub fn write_problem(path: impl AsRef<Path>, problem: &SpectralProblem, eigenvector_index: usize) -> Result<()> {
    let v = problem.eigenvectors.get(eigenvector_index).ok_or_else(|| {
        QpeError::InvalidArgument(format!("eigenvector index {eigenvector_index} out of range"))
    })?;
    let dim = problem.dim();
    let file = File::create(path.as_ref())?;
    write_complex(&file.create_group("matrix")?, &[dim, dim], problem.matrix.entries())?;
    write_complex(&file.create_group("eigenvector")?, &[dim], v)?;
    write_attr_i64(&file, "n_mat", problem.n_mat as i64)?;
    write_attr_i64(&file, "format_version", FORMAT_VERSION)?;
    if let Some(phases) = &problem.reference_phases {
        write_attr_f64(&file, "reference_phase", phases[eigenvector_index])?;
    }
    write_attr_str(&file, "provenance", problem.provenance.as_str())?;
    if let Some(seed) = problem.seed {
        write_attr_i64(&file, "seed", seed as i64)?;
    }
    write_attr_i64(&file, "eigenvector_index", eigenvector_index as i64)?;
    Ok(())
}

/// Reads a problem file. The result carries exactly one eigenvector and,
/// if the file has one, its reference phase. Unitarity is not checked.
pub fn read_problem(path: impl AsRef<Path>) -> Result<SpectralProblem> {
    let file = open_existing(path.as_ref())?;
    check_version(&file)?;
    let n_mat = read_attr_i64(&file, "n_mat")?;

    let (mshape, entries) = read_complex(&file, "matrix")?;
    let (vshape, eigenvector) = read_complex(&file, "eigenvector")?;

    if mshape.len() != 2 || mshape[0] != mshape[1] {
        return Err(QpeError::Dimension(format!("matrix shape {mshape:?} is not square")));
    }
    let dim = mshape[0];
    if dim < 2 || !dim.is_power_of_two() {
        return Err(QpeError::Dimension(format!("matrix dimension {dim} is not 2^n_mat with n_mat >= 1")));
    }
    if !(1..=62).contains(&n_mat) || dim != 1usize << n_mat {
        return Err(QpeError::Dimension(format!(
            "matrix dimension {dim} does not match n_mat = {n_mat}"
        )));
    }
    if vshape != [dim] {
        return Err(QpeError::Dimension(format!(
            "eigenvector shape {vshape:?} does not match matrix dimension {dim}"
        )));
    }

    let reference = read_opt_attr_f64(&file, "reference_phase")?;
    let seed = read_opt_attr_i64(&file, "seed")?.map(|s| s as u64);
    // retain the origin of files this crate wrote
    let provenance = match read_opt_attr_str(&file, "provenance")?.as_deref() {
        Some("analytic") => Provenance::Analytic,
        Some("random") => Provenance::Random,
        _ => Provenance::External,
    };

    Ok(SpectralProblem {
        n_mat: n_mat as usize,
        matrix: DenseOperator::from_row_major(dim, entries)?,
        eigenvectors: vec![eigenvector],
        reference_phases: reference.map(|p| vec![p]),
        provenance,
        seed,
    })
}

pub fn write_statevector(path: impl AsRef<Path>, state: &StateVector) -> Result<()> {
    let layout = state.layout();
    let file = File::create(path.as_ref())?;
    write_complex(&file.create_group("statevector")?, &[layout.dim()], state.amplitudes())?;
    write_attr_i64(&file, "n_meas", layout.n_meas() as i64)?;
    write_attr_i64(&file, "n_mat", layout.n_mat() as i64)?;
    write_attr_i64(&file, "format_version", FORMAT_VERSION)?;
    write_attr_str(&file, "bit_convention", BIT_CONVENTION)?;
    Ok(())
}

pub fn read_statevector(path: impl AsRef<Path>) -> Result<StateVector> {
    let file = open_existing(path.as_ref())?;
    check_version(&file)?;
    let n_meas = read_attr_i64(&file, "n_meas")?;
    let n_mat = read_attr_i64(&file, "n_mat")?;
    if n_meas < 1 || n_mat < 0 {
        return Err(format_err(format!("invalid register sizes n_meas={n_meas}, n_mat={n_mat}")));
    }
    let layout = if n_mat == 0 {
        RegisterLayout::bare(n_meas as usize)?
    } else {
        RegisterLayout::new(n_meas as usize, n_mat as usize)?
    };
    let (shape, amps) = read_complex(&file, "statevector")?;
    if shape != [layout.dim()] {
        return Err(QpeError::Dimension(format!(
            "statevector shape {shape:?} does not match 2^(n_meas + n_mat) = {}",
            layout.dim()
        )));
    }
    StateVector::from_amplitudes(layout, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::gen_analytic;

    #[test]
    fn problem_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.h5");
        let p = gen_analytic(2).unwrap();
        write_problem(&path, &p, 1).unwrap();
        let q = read_problem(&path).unwrap();
        assert_eq!(q.matrix, p.matrix);
        assert_eq!(q.eigenvectors, vec![p.eigenvectors[1].clone()]);
        assert_eq!(q.reference_phases, Some(vec![0.25]));
        assert_eq!(q.provenance, Provenance::Analytic);
    }

    #[test]
    fn missing_file_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(read_problem(dir.path().join("nope.h5")), Err(QpeError::Io(_))));
        assert!(matches!(read_statevector(dir.path().join("nope.h5")), Err(QpeError::Io(_))));
    }

    #[test]
    fn non_power_of_two_matrix() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.h5");
        let file = File::create(&path).unwrap();
        let m = vec![Complex64::new(1.0, 0.0); 9];
        write_complex(&file.create_group("matrix").unwrap(), &[3, 3], &m).unwrap();
        write_complex(&file.create_group("eigenvector").unwrap(), &[3], &m[..3]).unwrap();
        write_attr_i64(&file, "n_mat", 2).unwrap();
        write_attr_i64(&file, "format_version", 1).unwrap();
        drop(file);
        assert!(matches!(read_problem(&path), Err(QpeError::Dimension(_))));
    }

    #[test]
    fn missing_eigenvector_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.h5");
        let file = File::create(&path).unwrap();
        let m = vec![Complex64::new(1.0, 0.0); 4];
        write_complex(&file.create_group("matrix").unwrap(), &[2, 2], &m).unwrap();
        let g = file.create_group("eigenvector").unwrap();
        g.new_dataset::<f64>().shape(2).create("imag").unwrap().write_raw(&[0.0, 0.0]).unwrap();
        write_attr_i64(&file, "n_mat", 1).unwrap();
        write_attr_i64(&file, "format_version", 1).unwrap();
        drop(file);
        match read_problem(&path) {
            Err(QpeError::Format(msg)) => assert!(msg.contains("/eigenvector/real"), "{msg}"),
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn unsupported_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v2.h5");
        let file = File::create(&path).unwrap();
        write_attr_i64(&file, "format_version", 2).unwrap();
        drop(file);
        assert!(matches!(read_problem(&path), Err(QpeError::Format(_))));
    }

    #[test]
    fn statevector_length_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sv.h5");
        let file = File::create(&path).unwrap();
        write_complex(&file.create_group("statevector").unwrap(), &[8], &[Complex64::new(0.0, 0.0); 8]).unwrap();
        write_attr_i64(&file, "n_meas", 2).unwrap();
        write_attr_i64(&file, "n_mat", 2).unwrap();
        write_attr_i64(&file, "format_version", 1).unwrap();
        drop(file);
        assert!(matches!(read_statevector(&path), Err(QpeError::Dimension(_))));
    }

    #[test]
    fn statevector_attributes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sv.h5");
        let layout = RegisterLayout::new(3, 2).unwrap();
        let s = StateVector::new_basis_state(layout, 17).unwrap();
        write_statevector(&path, &s).unwrap();
        let file = File::open(&path).unwrap();
        assert_eq!(read_attr_i64(&file, "n_meas").unwrap(), 3);
        assert_eq!(read_attr_i64(&file, "n_mat").unwrap(), 2);
        assert_eq!(read_opt_attr_str(&file, "bit_convention").unwrap().as_deref(), Some(BIT_CONVENTION));
        assert_eq!(read_statevector(&path).unwrap(), s);
    }
}
