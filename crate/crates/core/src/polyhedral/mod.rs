//! Exact cones and polyhedra: H/V conversion, faces, duals, intersections.

mod cone;
mod dd;
pub mod linalg;
mod polyhedron;

pub use cone::{Cone, Facets, HCone};
pub use dd::{extreme_rays, Generators};
pub use linalg::Vector;
pub use polyhedron::{HPolyhedron, LinearForm, Polyhedron};

use crate::kernel::Scalar;
use crate::Result;

/// H-description to generators.
pub fn dd_convert(cone: &Cone) -> &Generators {
    cone.generators()
}

/// Generators to an irredundant H-description.
pub fn dd_convert_inverse(dim: usize, gens: &Generators) -> Result<Facets> {
    Ok(Cone::from_generators(dim, gens.rays.clone(), gens.lines.clone())?
        .facet_description()
        .clone())
}

pub fn dual_cone(cone: &Cone) -> Cone {
    cone.dual()
}

pub fn intersect(a: &Cone, b: &Cone) -> Cone {
    a.intersect(b)
}

pub fn face_generated_by(cone: &Cone, point: &[Scalar]) -> Result<Cone> {
    cone.face_generated_by(point)
}

pub fn is_face_of(face: &Cone, cone: &Cone) -> bool {
    face.is_face_of(cone)
}

pub fn lineality(cone: &Cone) -> &[Vector] {
    cone.lineality()
}

pub fn dim(cone: &Cone) -> usize {
    cone.dim()
}

pub fn relint_point(cone: &Cone) -> Vector {
    cone.relint_point()
}

pub fn vertices(p: &Polyhedron) -> Vec<Vector> {
    p.vertices()
}
