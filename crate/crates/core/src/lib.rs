// SPDX-License-Identifier: Apache-2.0

//! Online goal recognition in continuous spaces by planning.

pub mod benchmark;
pub mod geometry;
pub mod heuristics;
pub mod planner;
pub mod recognizer;
pub mod teamtask;
