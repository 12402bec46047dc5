from fdagenum.dag import D0, Fdag, Forest, expand, reduce, validate
from fdagenum.enumeration import (
    antecedent,
    level_counts,
    random_fdag,
    reverse_search,
    successors,
)
from fdagenum.fishburn import RowFishburnMatrix, from_matrix, to_matrix
from fdagenum.patterns import enumerate_subfdags, frequent_subfdags, origins
from fdagenum.trees import Tree, parse_tree
