"""Linear-programming and universal bounds for codes and designs."""
