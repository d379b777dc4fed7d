// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Scalar abstractions shared by the numerical kernels.

use std::fmt::Debug;
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Field-like scalar: enough for shortest-path counting and centrality
/// accumulation. Implemented for `f32`, `f64` and exact rationals.
pub trait Scalar:
    Copy + Debug + PartialOrd + Num + NumAssign + Send + Sync + 'static
{
    fn from_count(count: u64) -> Self;
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f32 {
    fn from_count(count: u64) -> Self {
        count as f32
    }
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn from_count(count: u64) -> Self {
        count as f64
    }
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for num_rational::Ratio<i128> {
    fn from_count(count: u64) -> Self {
        num_rational::Ratio::from_integer(count as i128)
    }
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Real floating point scalar for geometry and statistics.
pub trait Real: Scalar + Float + FloatConst + FromPrimitive + Sum {
    /// Converts an `f64` constant; panics never for finite input.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("finite literal")
    }
}

impl Real for f32 {}
impl Real for f64 {}
