using Xunit;

namespace Fixtures.Nested
{
    public class Outer
    {
        public class InnerTests
        {
            [Fact]
            public void InnerCaseRuns()
            {
                var widget = new Widget();
                var size = widget.Measure();
                Assert.NotNull(size);
            }
        }
    }
}
