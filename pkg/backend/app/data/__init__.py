# Built-in data tables
