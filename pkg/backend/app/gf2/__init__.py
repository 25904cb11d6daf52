# GF(2) linear algebra package init
