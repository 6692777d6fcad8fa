from .polygonal_mesh import (Vertex, Edge, Cell, RectGrid, MeshDiagnostic, PolygonalMesh, validate_mesh,
                             MeshValidationError, CLOSURE_TOLERANCE)
from .mesh_factory import (Domain, UNIT_SQUARE, MeshGenerationError, SplitMix64, build_uniform_rect_mesh,
                           build_tensor_rect_mesh, build_perturbed_quad_mesh, regular_polygon_mesh,
                           random_convex_polygon)
from .mesh_io import MeshParseError, load_mesh, save_mesh
