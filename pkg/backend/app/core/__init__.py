# Core package init
