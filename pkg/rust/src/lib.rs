//! Minimal BLS12-381 primitives exposed to Python.
//!
//! Only raw group arithmetic lives here; everything protocol-shaped
//! (encodings, hash framing, key handling) stays on the Python side.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use bls12_381::hash_to_curve::{ExpandMsgXmd, HashToCurve};
use bls12_381::{
    multi_miller_loop, G1Affine, G1Projective, G2Affine, G2Prepared, G2Projective, Gt, Scalar,
};

fn scalar_from_le(bytes: &[u8]) -> PyResult<Scalar> {
    let arr: [u8; 32] = bytes
        .try_into()
        .map_err(|_| PyValueError::new_err("scalar must be 32 bytes"))?;
    Option::<Scalar>::from(Scalar::from_bytes(&arr))
        .ok_or_else(|| PyValueError::new_err("scalar out of range"))
}

fn hash64(data: &[u8]) -> u64 {
    // cheap stable hash for __hash__: fold the compressed encoding
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in data {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[pyclass(frozen, name = "G1")]
struct G1Elem {
    point: G1Projective,
}

#[pymethods]
impl G1Elem {
    #[staticmethod]
    fn generator() -> Self {
        Self {
            point: G1Projective::generator(),
        }
    }

    #[staticmethod]
    fn identity() -> Self {
        Self {
            point: G1Projective::identity(),
        }
    }

    /// Decode a 48-byte compressed point; subgroup membership is enforced.
    #[staticmethod]
    fn from_compressed(data: &[u8]) -> PyResult<Self> {
        let arr: [u8; 48] = data
            .try_into()
            .map_err(|_| PyValueError::new_err("G1 encoding must be 48 bytes"))?;
        Option::<G1Affine>::from(G1Affine::from_compressed(&arr))
            .map(|a| Self { point: a.into() })
            .ok_or_else(|| PyValueError::new_err("invalid G1 encoding"))
    }

    /// RFC 9380 hash_to_curve with expand_message_xmd over SHA-256.
    #[staticmethod]
    fn hash_to_curve(msg: &[u8], dst: &[u8]) -> Self {
        let point =
            <G1Projective as HashToCurve<ExpandMsgXmd<sha2::Sha256>>>::hash_to_curve(msg, dst);
        Self { point }
    }

    fn to_compressed<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &G1Affine::from(&self.point).to_compressed())
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            point: self.point + other.point,
        }
    }

    /// Scalar is 32 little-endian bytes, already reduced mod the group order.
    fn mul(&self, scalar: &[u8]) -> PyResult<Self> {
        Ok(Self {
            point: self.point * scalar_from_le(scalar)?,
        })
    }

    fn neg(&self) -> Self {
        Self { point: -self.point }
    }

    fn is_identity(&self) -> bool {
        bool::from(self.point.is_identity())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.point == other.point
    }

    fn __hash__(&self) -> u64 {
        hash64(&G1Affine::from(&self.point).to_compressed())
    }
}

#[pyclass(frozen, name = "G2")]
struct G2Elem {
    point: G2Projective,
}

#[pymethods]
impl G2Elem {
    #[staticmethod]
    fn generator() -> Self {
        Self {
            point: G2Projective::generator(),
        }
    }

    #[staticmethod]
    fn identity() -> Self {
        Self {
            point: G2Projective::identity(),
        }
    }

    /// Decode a 96-byte compressed point; subgroup membership is enforced.
    #[staticmethod]
    fn from_compressed(data: &[u8]) -> PyResult<Self> {
        let arr: [u8; 96] = data
            .try_into()
            .map_err(|_| PyValueError::new_err("G2 encoding must be 96 bytes"))?;
        Option::<G2Affine>::from(G2Affine::from_compressed(&arr))
            .map(|a| Self { point: a.into() })
            .ok_or_else(|| PyValueError::new_err("invalid G2 encoding"))
    }

    fn to_compressed<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        PyBytes::new(py, &G2Affine::from(&self.point).to_compressed())
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            point: self.point + other.point,
        }
    }

    fn mul(&self, scalar: &[u8]) -> PyResult<Self> {
        Ok(Self {
            point: self.point * scalar_from_le(scalar)?,
        })
    }

    fn neg(&self) -> Self {
        Self { point: -self.point }
    }

    fn is_identity(&self) -> bool {
        bool::from(self.point.is_identity())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.point == other.point
    }

    fn __hash__(&self) -> u64 {
        hash64(&G2Affine::from(&self.point).to_compressed())
    }
}

#[pyclass(frozen, name = "Gt")]
struct GtElem {
    value: Gt,
}

#[pymethods]
impl GtElem {
    #[staticmethod]
    fn identity() -> Self {
        Self { value: Gt::identity() }
    }

    /// Group operation (written additively by the underlying crate).
    fn combine(&self, other: &Self) -> Self {
        Self {
            value: self.value + other.value,
        }
    }

    fn pow(&self, scalar: &[u8]) -> PyResult<Self> {
        Ok(Self {
            value: self.value * scalar_from_le(scalar)?,
        })
    }

    fn inv(&self) -> Self {
        Self { value: -self.value }
    }

    fn is_identity(&self) -> bool {
        self.value == Gt::identity()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

#[pyfunction]
fn pairing(p: &G1Elem, q: &G2Elem) -> GtElem {
    GtElem {
        value: bls12_381::pairing(&G1Affine::from(&p.point), &G2Affine::from(&q.point)),
    }
}

/// Product of pairings compared against 1, sharing one final exponentiation.
#[pyfunction]
fn multi_pairing_is_identity(pairs: Vec<(Py<G1Elem>, Py<G2Elem>)>) -> PyResult<bool> {
    if pairs.is_empty() {
        return Err(PyValueError::new_err("empty pairing list"));
    }
    let prepared: Vec<(G1Affine, G2Prepared)> = pairs
        .iter()
        .map(|(p, q)| {
            (
                G1Affine::from(&p.get().point),
                G2Prepared::from(G2Affine::from(&q.get().point)),
            )
        })
        .collect();
    let terms: Vec<(&G1Affine, &G2Prepared)> = prepared.iter().map(|(p, q)| (p, q)).collect();
    let result = multi_miller_loop(&terms).final_exponentiation();
    Ok(result == Gt::identity())
}

#[pymodule]
fn _backend(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<G1Elem>()?;
    m.add_class::<G2Elem>()?;
    m.add_class::<GtElem>()?;
    m.add_function(wrap_pyfunction!(pairing, m)?)?;
    m.add_function(wrap_pyfunction!(multi_pairing_is_identity, m)?)?;
    Ok(())
}
