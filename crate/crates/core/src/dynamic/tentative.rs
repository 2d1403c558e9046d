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

use rand::Rng;

use crate::colorset::Palette;
use crate::graph::{Color, NULL_COLOR};

/// Uniform member of `palette`, NULL if it is empty.
pub(crate) fn draw<R: Rng + ?Sized>(palette: &Palette, rng: &mut R) -> Color {
    if palette.is_empty() {
        return NULL_COLOR;
    }
    palette
        .nth(rng.random_range(0..palette.len()))
        .expect("index below len")
}

/// Updates a tentative color after the edge's palette moved from `prev` to
/// `now`, keeping it uniform on `now` (NULL iff `now` is empty) while
/// changing it as rarely as possible.
///
/// If the old color left the palette it is redrawn. Otherwise a fresh draw
/// is adopted only when it is NULL or one of the newly available colors.
pub fn tentatively_color<R: Rng + ?Sized>(
    c_prev: Color,
    prev: &Palette,
    now: &Palette,
    rng: &mut R,
) -> Color {
    if prev.contains(c_prev) && !now.contains(c_prev) {
        return draw(now, rng);
    }
    let c = draw(now, rng);
    if c == NULL_COLOR || !prev.contains(c) {
        c
    } else {
        c_prev
    }
}
