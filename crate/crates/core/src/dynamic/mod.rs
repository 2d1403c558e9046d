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

//! Fully dynamic edge coloring under an oblivious update sequence.
//!
//! A gadget of dummy cliques keeps the maintained graph near-regular; each
//! pair gets a fixed round; tentative colors are repaired round by round so
//! that they stay distributed as in the offline algorithm while few of them
//! change. Failed and last-round edges fall back to [`SimpleColor`].

mod gadget;
mod rounds;
mod simple_color;
mod state;
mod stats;
mod tentative;

pub use gadget::{gadget_wrap, Gadget};
pub use rounds::{capped_geometric, RoundAssignment};
pub use simple_color::SimpleColor;
pub use state::{run_dynamic, DynamicColoring, DynamicConfig, StepReport, SweepMode, UpdateReport};
pub use stats::{dirty_recursion, recourse_stats, DirtyRound, RecourseStats};
pub use tentative::tentatively_color;
