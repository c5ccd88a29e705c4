//! WebAssembly bindings for the interactive demo page in `www/`.
//!
//! Three operations are exposed: binary curves of `π(w₁)` against `p`,
//! ternary maps of `π_G(w₃)` over the simplex, and a per-distribution
//! analysis (transforms, specificity and the generalized converse).
//! Tables cross the boundary as flat `Float64Array`s.

use wasm_bindgen::prelude::*;

pub mod model;

fn js_error(err: possibility::Error) -> JsError {
    JsError::new(&err.to_string())
}

/// Rows of `[p, symmetric, optimal, generalized(n) for each n]`, flattened.
/// Pass `Infinity` as an exponent for the optimal limit.
#[wasm_bindgen(js_name = binaryCurves)]
pub fn binary_curves(exponents: Vec<f64>, grid_points: usize) -> Result<Vec<f64>, JsError> {
    model::binary_curves(&exponents, grid_points).map_err(js_error)
}

/// Rows of `[p1, p2, π_G(w₃)]`, flattened, for points inside the simplex.
#[wasm_bindgen(js_name = ternaryMap)]
pub fn ternary_map(n: f64, step: f64) -> Result<Vec<f64>, JsError> {
    model::ternary_map(n, step).map_err(js_error)
}

#[wasm_bindgen]
pub struct Analysis(model::Analysis);

#[wasm_bindgen]
impl Analysis {
    #[wasm_bindgen(getter)]
    pub fn probability(&self) -> Vec<f64> {
        self.0.probability.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn symmetric(&self) -> Vec<f64> {
        self.0.symmetric.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn optimal(&self) -> Vec<f64> {
        self.0.optimal.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn generalized(&self) -> Vec<f64> {
        self.0.generalized.clone()
    }

    #[wasm_bindgen(getter, js_name = specificitySymmetric)]
    pub fn specificity_symmetric(&self) -> f64 {
        self.0.specificity_symmetric
    }

    #[wasm_bindgen(getter, js_name = specificityGeneralized)]
    pub fn specificity_generalized(&self) -> f64 {
        self.0.specificity_generalized
    }

    /// The probability recovered from the generalized possibilities.
    #[wasm_bindgen(getter)]
    pub fn recovered(&self) -> Vec<f64> {
        self.0.recovered.clone()
    }

    #[wasm_bindgen(getter, js_name = solverIterations)]
    pub fn solver_iterations(&self) -> usize {
        self.0.solver_iterations
    }

    #[wasm_bindgen(getter, js_name = solverConverged)]
    pub fn solver_converged(&self) -> bool {
        self.0.solver_converged
    }
}

/// Analyzes raw masses (renormalized when their total is within 0.1% of 1).
#[wasm_bindgen]
pub fn analyze(masses: Vec<f64>, n: f64) -> Result<Analysis, JsError> {
    model::analyze(masses, n).map(Analysis).map_err(js_error)
}
