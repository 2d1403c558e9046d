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

pub mod baselines;
pub mod colorset;
pub mod dynamic;
pub mod error;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod io;
pub mod nibble;
pub mod params;
pub mod random_order;
pub mod rng;
