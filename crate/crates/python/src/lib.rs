//! Python bindings: code construction, channel LLRs, decoding, budget table
//! and Monte-Carlo points.

use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use scldpc::channel::{generate_allzero_llrs, ChannelSpec, LlrBlock};
use scldpc::code::{self, sample_realization_with_limit, ExponentMatrix, DEFAULT_RESAMPLE_LIMIT};
use scldpc::kernel::{self, FixedLlr};
use scldpc::sim::{self, DecoderRow, ResultRow};
use scldpc::window::{self, BudgetSpec, EtSet, Strategy, WindowConfig};

fn py_err(e: scldpc::Error) -> PyErr {
    match e {
        scldpc::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn exponent_matrix(rows: Vec<Vec<i32>>) -> PyResult<ExponentMatrix> {
    ExponentMatrix::from_rows(&rows).map_err(py_err)
}

#[pyclass(name = "CodeSpec", from_py_object)]
#[derive(Clone)]
struct PyCodeSpec {
    inner: code::CodeSpec,
}

#[pymethods]
impl PyCodeSpec {
    #[new]
    #[pyo3(signature = (vn_blocks=2, cn_blocks=1, memory=4, period=3, lifting=256, coupling_len=100))]
    fn new(
        vn_blocks: usize,
        cn_blocks: usize,
        memory: usize,
        period: usize,
        lifting: usize,
        coupling_len: usize,
    ) -> PyResult<Self> {
        let inner = code::CodeSpec {
            vn_blocks,
            cn_blocks,
            memory,
            period,
            lifting,
            coupling_len,
        };
        inner.validate().map_err(py_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn lifting(&self) -> usize {
        self.inner.lifting
    }

    #[getter]
    fn coupling_len(&self) -> usize {
        self.inner.coupling_len
    }

    #[getter]
    fn memory(&self) -> usize {
        self.inner.memory
    }

    fn num_layers(&self) -> usize {
        self.inner.num_layers()
    }

    fn codeword_len(&self) -> usize {
        self.inner.codeword_len()
    }

    fn info_len(&self) -> usize {
        self.inner.info_len()
    }

    fn layer_profile(&self) -> Vec<usize> {
        self.inner.layer_profile()
    }

    /// Rates as `(numerator, denominator)` pairs.
    fn rates<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.rates();
        let d = PyDict::new(py);
        d.set_item("k", r.k)?;
        d.set_item("n", r.n)?;
        d.set_item("rate", (*r.rate.numer(), *r.rate.denom()))?;
        d.set_item(
            "asymptotic_rate",
            (*r.asymptotic_rate.numer(), *r.asymptotic_rate.denom()),
        )?;
        d.set_item("constraint_len", r.constraint_len)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "CodeSpec(vn_blocks={}, cn_blocks={}, memory={}, period={}, lifting={}, coupling_len={})",
            s.vn_blocks, s.cn_blocks, s.memory, s.period, s.lifting, s.coupling_len
        )
    }
}

#[pyclass(name = "CodeRealization", skip_from_py_object)]
struct PyCodeRealization {
    inner: code::CodeRealization,
}

#[pymethods]
impl PyCodeRealization {
    /// Draws a 4-cycle-free realization.
    #[staticmethod]
    #[pyo3(signature = (spec, seed, resample_limit=DEFAULT_RESAMPLE_LIMIT))]
    fn sample(spec: &PyCodeSpec, seed: u64, resample_limit: usize) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inner =
            sample_realization_with_limit(&spec.inner, &mut rng, resample_limit).map_err(py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_dump(text: &str) -> PyResult<Self> {
        code::CodeRealization::from_dump(text)
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    fn to_dump(&self) -> String {
        self.inner.to_dump()
    }

    fn spec(&self) -> PyCodeSpec {
        PyCodeSpec {
            inner: *self.inner.spec(),
        }
    }

    fn has_four_cycle(&self) -> bool {
        self.inner.has_four_cycle()
    }

    fn num_layers(&self) -> usize {
        self.inner.num_layers()
    }

    /// `(vn_block, shift)` pairs of one layer.
    fn layer(&self, l: usize) -> PyResult<Vec<(usize, usize)>> {
        if l >= self.inner.num_layers() {
            return Err(PyValueError::new_err(format!("layer {l} out of range")));
        }
        Ok(self
            .inner
            .layer(l)
            .iter()
            .map(|e| (e.vn_block, e.shift))
            .collect())
    }

    /// Coupled exponent matrix, -1 for empty blocks.
    fn coupled(&self) -> Vec<Vec<i32>> {
        self.inner.coupled().to_rows()
    }
}

/// Dense 0/1 lifted matrix.
#[pyfunction]
fn lift(rows: Vec<Vec<i32>>, lifting: usize) -> PyResult<Vec<Vec<u32>>> {
    let m = exponent_matrix(rows)?;
    let h = code::lift(&m, lifting).map_err(py_err)?;
    // Lists of ints rather than `bytes` rows.
    Ok(h.to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(u32::from).collect())
        .collect())
}

#[pyfunction]
fn has_four_cycle(rows: Vec<Vec<i32>>, lifting: usize) -> PyResult<bool> {
    let m = exponent_matrix(rows)?;
    m.check_lifting(lifting).map_err(py_err)?;
    Ok(code::has_four_cycle(&m, lifting))
}

/// Code-bit LLRs of one all-zero codeword through the faded 16-QAM channel.
#[pyfunction]
#[pyo3(signature = (n, snr_db, seed, fading=true, branches=4))]
fn generate_llrs(
    n: usize,
    snr_db: f64,
    seed: u64,
    fading: bool,
    branches: usize,
) -> PyResult<Vec<f64>> {
    let spec = ChannelSpec {
        snr_db,
        branches,
        fading_enabled: fading,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_allzero_llrs(n, &spec, &mut rng)
        .map(LlrBlock::into_inner)
        .map_err(py_err)
}

fn quantize_all(xs: &[f64]) -> PyResult<Vec<FixedLlr>> {
    xs.iter()
        .map(|&x| FixedLlr::quantize(x).map_err(py_err))
        .collect()
}

/// Fixed-point box-plus of two LLRs.
#[pyfunction]
fn box_plus(a: f64, b: f64) -> PyResult<f64> {
    let q = quantize_all(&[a, b])?;
    Ok(kernel::box_plus(q[0], q[1]).to_f64())
}

/// Fixed-point blended check-node update.
#[pyfunction]
fn cn_update_blend(inputs: Vec<f64>) -> PyResult<Vec<f64>> {
    let q = quantize_all(&inputs)?;
    let mut out = vec![FixedLlr::ZERO; q.len()];
    kernel::cn_update_blend(&q, &mut out).map_err(py_err)?;
    Ok(out.iter().map(|v| v.to_f64()).collect())
}

fn parse_strategy(s: &str) -> PyResult<Strategy> {
    s.parse().map_err(py_err)
}

fn parse_et(s: &str) -> PyResult<EtSet> {
    s.parse().map_err(py_err)
}

/// Decodes one block of channel LLRs. `strategy` is "VN", "CN" or "FBD";
/// the window is ignored for "FBD".
#[pyfunction]
#[pyo3(signature = (code, llrs, strategy="VN", window=12, et_set="TARGET", imax_fbd=200))]
fn decode<'py>(
    py: Python<'py>,
    code: &PyCodeRealization,
    llrs: Vec<f64>,
    strategy: &str,
    window: usize,
    et_set: &str,
    imax_fbd: u32,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = code.inner.spec();
    let budget = BudgetSpec::new(spec, imax_fbd);
    let cfg = WindowConfig::new(
        spec,
        parse_strategy(strategy)?,
        window,
        parse_et(et_set)?,
        &budget,
    )
    .map_err(py_err)?;
    let llrs = LlrBlock::new(llrs);
    let out = py
        .detach(|| window::decode_windowed(&llrs, &code.inner, &cfg))
        .map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("success", out.success)?;
    d.set_item("nmu", out.nmu)?;
    d.set_item("nmu_max", cfg.nmu_max(spec).map_err(py_err)?)?;
    d.set_item("imax", cfg.imax_per_window)?;
    d.set_item(
        "bit_errors",
        out.info_bits.iter().filter(|&&b| b != 0).count(),
    )?;
    d.set_item("per_window_iters", out.per_window_iters)?;
    Ok(d)
}

/// Budget table rows as dicts with keys strategy, window, nmsg, imax, nmu_max.
#[pyfunction]
#[pyo3(signature = (spec=None, imax_fbd=200))]
fn table1<'py>(
    py: Python<'py>,
    spec: Option<&PyCodeSpec>,
    imax_fbd: u32,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let spec = spec.map_or_else(
        || code::CodeSpec::regular_5_10(256, 100),
        |s| s.inner,
    );
    let table = sim::reproduce_table1(&spec, imax_fbd).map_err(py_err)?;
    table
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("strategy", r.strategy.as_str())?;
            d.set_item("window", r.window)?;
            d.set_item("nmsg", r.nmsg)?;
            d.set_item("imax", r.imax)?;
            d.set_item("nmu_max", r.nmu_max)?;
            Ok(d)
        })
        .collect()
}

#[pyfunction]
fn budget_deviation() -> PyResult<f64> {
    let table =
        sim::reproduce_table1(&code::CodeSpec::regular_5_10(256, 100), 200).map_err(py_err)?;
    Ok(sim::budget_deviation(&table))
}

#[pyclass(name = "RunConfig", from_py_object)]
#[derive(Clone)]
struct PyRunConfig {
    inner: sim::RunConfig,
}

#[pymethods]
impl PyRunConfig {
    #[staticmethod]
    fn from_ini(text: &str) -> PyResult<Self> {
        sim::RunConfig::from_ini_str(text)
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    #[staticmethod]
    fn from_file(path: PathBuf) -> PyResult<Self> {
        sim::RunConfig::from_file(&path)
            .map(|inner| Self { inner })
            .map_err(py_err)
    }

    #[getter]
    fn get_trials(&self) -> u64 {
        self.inner.trials
    }

    #[setter]
    fn set_trials(&mut self, trials: u64) {
        self.inner.trials = trials;
    }

    #[getter]
    fn get_seed(&self) -> u64 {
        self.inner.seed
    }

    #[setter]
    fn set_seed(&mut self, seed: u64) {
        self.inner.seed = seed;
    }

    #[getter]
    fn get_snr_db(&self) -> Vec<f64> {
        self.inner.snr_db.clone()
    }

    #[setter]
    fn set_snr_db(&mut self, snr_db: Vec<f64>) {
        self.inner.snr_db = snr_db;
    }

    #[getter]
    fn get_workers(&self) -> usize {
        self.inner.workers
    }

    #[setter]
    fn set_workers(&mut self, workers: usize) {
        self.inner.workers = workers;
    }

    #[getter]
    fn get_out(&self) -> Option<PathBuf> {
        self.inner.out.clone()
    }

    #[setter]
    fn set_out(&mut self, out: Option<PathBuf>) {
        self.inner.out = out;
    }

    /// Decoder rows as labels.
    fn decoders(&self) -> Vec<String> {
        self.inner.decoders.iter().map(DecoderRow::label).collect()
    }
}

fn result_dict<'py>(py: Python<'py>, r: &ResultRow) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("decoder", &r.decoder)?;
    d.set_item("strategy", &r.strategy)?;
    d.set_item("window", r.window)?;
    d.set_item("et_set", &r.et_set)?;
    d.set_item("snr_db", r.snr_db)?;
    d.set_item("trials", r.trials)?;
    d.set_item("block_errors", r.block_errors)?;
    d.set_item("bler", r.bler)?;
    d.set_item("bler_lo", r.bler_lo)?;
    d.set_item("bler_hi", r.bler_hi)?;
    d.set_item("anmu", r.anmu)?;
    d.set_item("rel_anmu", r.rel_anmu)?;
    d.set_item("imax", r.imax)?;
    d.set_item("nmu_max", r.nmu_max)?;
    d.set_item("seed", r.seed)?;
    Ok(d)
}

/// One Monte-Carlo point. `row` uses the config syntax, e.g. "vn 12 target".
#[pyfunction]
fn run_point<'py>(
    py: Python<'py>,
    cfg: &PyRunConfig,
    row: &str,
    snr_db: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let row: DecoderRow = row.parse().map_err(py_err)?;
    let cfg = cfg.inner.clone();
    let r = py
        .detach(|| sim::run_point(&cfg, &row, snr_db))
        .map_err(py_err)?;
    result_dict(py, &r)
}

/// Every configured row at every SNR; writes the output files when set.
#[pyfunction]
fn run_sweep<'py>(py: Python<'py>, cfg: &PyRunConfig) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let cfg = cfg.inner.clone();
    let rows = py.detach(|| sim::run_sweep(&cfg)).map_err(py_err)?;
    rows.iter().map(|r| result_dict(py, r)).collect()
}

#[pymodule]
fn pyscldpc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCodeSpec>()?;
    m.add_class::<PyCodeRealization>()?;
    m.add_class::<PyRunConfig>()?;
    m.add_function(wrap_pyfunction!(lift, m)?)?;
    m.add_function(wrap_pyfunction!(has_four_cycle, m)?)?;
    m.add_function(wrap_pyfunction!(generate_llrs, m)?)?;
    m.add_function(wrap_pyfunction!(box_plus, m)?)?;
    m.add_function(wrap_pyfunction!(cn_update_blend, m)?)?;
    m.add_function(wrap_pyfunction!(decode, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add_function(wrap_pyfunction!(budget_deviation, m)?)?;
    m.add_function(wrap_pyfunction!(run_point, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    Ok(())
}
