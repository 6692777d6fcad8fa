from .vtk_write import CellField, VtkWrite, VTK_POLYGON
from .table_write import (TABLE_HEADER, format_error, format_order, write_csv, write_table, write_full_table,
                          write_table_files)
from .field_write import write_traces, write_summary, write_fields_vtk
