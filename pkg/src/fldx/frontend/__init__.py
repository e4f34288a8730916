from .parser import parse_program, parse_expr, parse_pred
from .printer import print_program, print_function
