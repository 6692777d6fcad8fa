from .element_matrices import (GeometryError, QuadratureModeError, QuadratureRule, ElementGeometry, LinearExtension,
                               ElementMatrices, element_geometry, extension_matrix, extension_coefficients,
                               evaluate_extension, weak_gradient, weak_divergence, stabilizer_matrix,
                               stabilizer_value, gradient_matrix, divergence_vectors, load_vector, element_matrices,
                               is_axis_aligned_rectangle)
